#include "dglift/obstruction.hpp"

#include <stdexcept>
#include <string>

namespace dglift {

namespace {

Scalar sign(const Field& f, int e) { return (e % 2 == 0) ? Scalar::one(f) : -Scalar::one(f); }

// Per-generator blocks of an element of N (x)_B W_k.
using Blocks = std::map<std::size_t, TensorTerms>;

SparseVec column_of(const SparseMatrix& m, const SparseVec& x) { return m.apply(x); }

}  // namespace

ObstructionComplex::ObstructionComplex(SemifreeModule n, std::shared_ptr<const TensorTower> tower)
    : n_(std::move(n)), tower_(std::move(tower)) {
  if (!(tower_->algebra() == n_.algebra())) throw Error(ErrorKind::OwnerMismatch, "tower over a different algebra");
  for (int i = 0; i <= tower_->max_tensor(); ++i) carriers_.push_back(std::make_shared<TensorPowerCarrier>(tower_, i));
}

std::shared_ptr<const Carrier> ObstructionComplex::carrier(int i) const {
  if (i < 0 || i > max_tensor())
    throw Error(ErrorKind::CapExceeded, "tensor degree " + std::to_string(i) + " outside 0.." + std::to_string(max_tensor()));
  return carriers_[static_cast<std::size_t>(i)];
}

TargetSpace ObstructionComplex::component(int i, int extra) const { return TargetSpace(n_, carrier(i), i + extra); }

SparseVec ObstructionComplex::generator(std::size_t l) const {
  const int d = n_.basis_element(l).degree;
  auto c = tower_->coordinates(0, 0, tensor::pure(n_.algebra(), {n_.algebra().unit()}));
  if (!c) throw std::logic_error("unit outside B");
  return c->offset(component(0).offset(d, l));
}

SparseMatrix ObstructionComplex::w_matrix(int i, int d) const {
  const TargetSpace src = component(i);
  const TargetSpace dst = component(i + 1);
  const Algebra& alg = n_.algebra();
  SparseMatrix out(dst.dim(d), src.dim(d));
  for (std::size_t mu = 0; mu < n_.rank(); ++mu) {
    const int cd = src.carrier_degree(d, mu);
    if (tower_->dim(i, cd) == 0) continue;
    const auto& basis = tower_->basis(i, cd);
    const std::size_t col0 = src.offset(d, mu);
    for (const auto& [nu, b] : n_.differential_column(mu)) {
      const TensorTerms db = tensor::universal_derivation(b);
      if (db.empty()) continue;
      const int td = dst.carrier_degree(d, nu);
      const std::size_t row0 = dst.offset(d, nu);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        auto c = tower_->coordinates(i + 1, td, tensor::concatenate(alg, db, basis[j]));
        if (!c) throw std::logic_error("w leaves the tensor power of J");
        for (const auto& [r, v] : c->entries()) out.add(row0 + r, col0 + j, v);
      }
    }
  }
  return out;
}

SparseMatrix ObstructionComplex::w_plus_matrix(int i, int d) const {
  const TargetSpace src = component(i);
  const TargetSpace dst = component(i + 1);
  const Algebra& alg = n_.algebra();
  const Field& f = alg.field();
  const Monomial one = alg.unit();
  SparseMatrix out(dst.dim(d), src.dim(d));

  // sigma o d o rho on e_mu * m0, as blocks in N (x)_B B^e.
  auto sigma_d_rho = [&](std::size_t mu, const Monomial& m0) {
    Blocks rho{{mu, tensor::pure(alg, {one, m0})}};
    Blocks dd;
    for (const auto& [kappa, x] : rho) {
      for (const auto& [nu, b] : n_.differential_column(kappa))
        for (const auto& [m, c] : b.terms()) tensor::add(dd[nu], tensor::left_multiply(alg, m, x), c);
      tensor::add(dd[kappa], tensor::differential(alg, x), sign(f, n_.basis_element(kappa).degree));
    }
    for (auto& [nu, x] : dd) {
      const Element p = tensor::envelope_projection(alg, x);
      for (const auto& [m, c] : p.terms()) tensor::add(x, tensor::pure(alg, {one, m}), -c);
    }
    return dd;
  };

  for (std::size_t mu = 0; mu < n_.rank(); ++mu) {
    const int cd = src.carrier_degree(d, mu);
    if (tower_->dim(i, cd) == 0) continue;
    const auto& basis = tower_->basis(i, cd);
    const std::size_t col0 = src.offset(d, mu);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      Blocks acc;
      for (const auto& [key, c] : basis[j]) {
        TensorKey rest{one};
        rest.insert(rest.end(), key.begin() + 1, key.end());
        const TensorTerms tail = tensor::pure(alg, rest);
        for (const auto& [nu, x] : sigma_d_rho(mu, key[0])) tensor::add(acc[nu], tensor::concatenate(alg, x, tail), c);
      }
      for (const auto& [nu, x] : acc) {
        if (x.empty()) continue;
        auto co = tower_->coordinates(i + 1, dst.carrier_degree(d, nu), x);
        if (!co) throw std::logic_error("sigma-rho image leaves the tensor power of J");
        for (const auto& [r, v] : co->entries()) out.add(dst.offset(d, nu) + r, col0 + j, v);
      }
    }
  }
  return out;
}

std::string ObstructionComplex::w_defect(int i, int d) const {
  const TargetSpace src = component(i);
  const TargetSpace dst = component(i + 1);
  if (dst.differential(d).compose(w_matrix(i, d)) != w_matrix(i, d - 1).compose(src.differential(d)))
    return "w does not commute with d in tensor degree " + std::to_string(i) + ", DG degree " + std::to_string(d);
  const Algebra& alg = n_.algebra();
  for (std::size_t v = 0; v < alg.num_variables(); ++v) {
    const Element x = alg.generator(v);
    const int k = alg.variable(v).degree;
    if (d + k > tower_->max_degree()) continue;
    if (dst.right_action(x, d).compose(w_matrix(i, d)) != w_matrix(i, d + k).compose(src.right_action(x, d)))
      return "w is not right linear for " + alg.variable(v).name;
  }
  return {};
}

std::vector<SparseVec> ObstructionComplex::chi_power(int ell) const {
  const Algebra& alg = n_.algebra();
  const TargetSpace dst = component(ell);
  std::vector<SparseVec> out;
  for (std::size_t l = 0; l < n_.rank(); ++l) {
    Blocks acc;
    auto walk = [&](auto&& self, std::size_t kappa, const TensorTerms& t, int depth) -> void {
      if (depth == ell) {
        tensor::add(acc[kappa], t, Scalar::one(alg.field()));
        return;
      }
      for (const auto& [mu, b] : n_.differential_column(kappa)) {
        TensorTerms next = tensor::concatenate(alg, tensor::universal_derivation(b), t);
        if (!next.empty()) self(self, mu, next, depth + 1);
      }
    };
    walk(walk, l, tensor::pure(alg, {alg.unit()}), 0);
    const int d = n_.basis_element(l).degree;
    SparseVec v;
    for (const auto& [kappa, t] : acc) {
      if (t.empty()) continue;
      auto c = tower_->coordinates(ell, dst.carrier_degree(d, kappa), t);
      if (!c) throw std::logic_error("chain expansion leaves the tensor power of J");
      v.add_scaled(c->offset(dst.offset(d, kappa)), Scalar::one(alg.field()));
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<SparseVec> ObstructionComplex::chi_power_iterated(int ell) const {
  std::vector<SparseVec> out;
  for (std::size_t l = 0; l < n_.rank(); ++l) {
    const int d = n_.basis_element(l).degree;
    SparseVec v = generator(l);
    for (int i = 0; i < ell; ++i) v = column_of(w_matrix(i, d), v);
    out.push_back(std::move(v));
  }
  return out;
}

HomSpace ObstructionComplex::gamma_space(int n, int m) const { return HomSpace(n_, component(n, m)); }

std::size_t ObstructionComplex::gamma_dim(int n) const { return n < 0 ? 0 : gamma_space(n).dim(); }

std::optional<SparseVec> ObstructionComplex::omega_witness() const {
  HomSpace space = gamma_space(1);
  const SparseVec chi = as_map_vector(space, chi_power(1));
  if (!space.is_chain_map(chi)) throw std::logic_error("chi is not a chain map");
  auto h = space.null_homotopy(chi);
  if (h && space.boundary(*h) != chi) throw std::logic_error("omega witness failed its recheck");
  return h;
}

SparseVec ObstructionComplex::compose_w(const HomSpace& src, const HomSpace& dst, int n, int m,
                                       const SparseVec& f) const {
  std::vector<SparseVec> images;
  for (std::size_t l = 0; l < n_.rank(); ++l)
    images.push_back(w_matrix(n, n_.basis_element(l).degree - m).apply(map_block(src, f, l)));
  return as_map_vector(dst, images);
}

SparseMatrix ObstructionComplex::omega_action_matrix(int n, int m) const {
  HomSpace src = gamma_space(n, m);
  HomSpace dst = gamma_space(n + 1, m);
  SparseMatrix out(dst.dim(), src.dim());
  for (std::size_t j = 0; j < src.dim(); ++j) {
    const SparseVec g = compose_w(src, dst, n, m, src.classes()[j]);
    out.set_column(j, dst.class_coordinates(g));
  }
  return out;
}

std::pair<std::size_t, std::size_t> ObstructionComplex::cone_component_dims(int n, int d) const {
  if (n <= -2) return {0, 0};
  if (n == -1) return {component(0).dim(d), n_.dim(d)};
  const std::size_t computed = component(n + 1).dim(d) + component(n).dim(d - 1);
  // N (x)_A Sigma^{n+1} J^{(x)n}: B is free over A on the extra monomials.
  const Algebra& alg = n_.algebra();
  std::size_t predicted = 0;
  for (std::size_t l = 0; l < n_.rank(); ++l) {
    const int rest = d - n - 1 - n_.basis_element(l).degree;
    for (int w = 0; w <= rest; ++w) predicted += alg.extra_basis(w).size() * tower_->dim(n, rest - w);
  }
  return {computed, predicted};
}

std::optional<int> ObstructionComplex::nilpotency_index(int i, int d, std::size_t j) const {
  SparseVec v = SparseVec::unit(n_.algebra().field(), j);
  for (int k = 1; i + k <= max_tensor(); ++k) {
    v = w_matrix(i + k - 1, d).apply(v);
    if (v.empty()) return k;
  }
  return std::nullopt;
}

SparseVec as_map_vector(const HomSpace& space, const std::vector<SparseVec>& images) {
  SparseVec out;
  for (std::size_t l = 0; l < images.size(); ++l)
    for (const auto& [i, c] : images[l].entries()) out.add(space.map_offset(l) + i, c);
  return out;
}

SparseVec map_block(const HomSpace& space, const SparseVec& f, std::size_t l) {
  const std::size_t lo = space.map_offset(l);
  const std::size_t hi = space.map_offset(l + 1);
  SparseVec out;
  for (const auto& [i, c] : f.entries())
    if (i >= lo && i < hi) out.add(i - lo, c);
  return out;
}

SparseMatrix tensor_map_matrix(const ObstructionComplex& src, const ObstructionComplex& dst, const ChainMap& f, int i,
                               int d) {
  if (f.shift() != 0) throw std::invalid_argument("tensor_map_matrix needs a degree-0 map");
  const TargetSpace from = src.component(i);
  const TargetSpace to = dst.component(i);
  const TensorTower& tower = src.tower();
  SparseMatrix out(to.dim(d), from.dim(d));
  for (std::size_t mu = 0; mu < f.source().rank(); ++mu) {
    const int cd = from.carrier_degree(d, mu);
    if (tower.dim(i, cd) == 0) continue;
    for (std::size_t nu = 0; nu < f.target().rank(); ++nu) {
      for (const auto& [m, c] : f.image(mu)[nu].terms()) {
        const SparseMatrix act = tower.left_action(i, m, cd);
        for (std::size_t j = 0; j < act.cols(); ++j)
          for (const auto& [r, v] : act.column(j).entries()) out.add(to.offset(d, nu) + r, from.offset(d, mu) + j, v * c);
      }
    }
  }
  return out;
}

SemifreeModule rebase(const SemifreeModule& n, const std::vector<ModuleVector>& u) {
  const std::size_t r = n.rank();
  const Algebra& alg = n.algebra();
  if (u.size() != r) throw std::invalid_argument("one image per generator expected");
  for (std::size_t l = 0; l < r; ++l) {
    if (u[l].size() != r || u[l][l] != alg.one()) throw std::invalid_argument("change of basis is not unipotent");
    for (std::size_t m = l + 1; m < r; ++m)
      if (!u[l][m].is_zero()) throw std::invalid_argument("change of basis is not lower triangular");
  }
  std::vector<std::map<std::size_t, Element>> diff(r);
  for (std::size_t l = 0; l < r; ++l) {
    const ModuleVector v = n.apply_differential(u[l]);
    std::vector<Element> c(r, alg.zero());
    for (std::size_t k = r; k-- > 0;) {
      Element x = v[k];
      for (std::size_t k2 = k + 1; k2 < r; ++k2) x = x - u[k2][k] * c[k2];
      c[k] = x;
    }
    for (std::size_t k = 0; k < r; ++k)
      if (!c[k].is_zero()) diff[l].emplace(k, c[k]);
  }
  return SemifreeModule(alg, n.basis(), std::move(diff), n.max_degree());
}

}  // namespace dglift
