#include "dglift/module.hpp"

#include <algorithm>
#include <mutex>
#include <queue>
#include <sstream>

namespace dglift {

namespace {

Scalar sign_scalar(const Field& f, int exponent) { return Scalar(f, (exponent % 2 == 0) ? 1L : -1L); }

}  // namespace

struct SemifreeModule::Cache {
  std::mutex mu;
  std::map<int, GradedPiece> pieces;
};

SemifreeModule::SemifreeModule(Algebra alg, std::vector<BasisElement> basis,
                               std::vector<std::map<std::size_t, Element>> diff, int max_degree)
    : alg_(std::move(alg)),
      basis_(std::move(basis)),
      diff_(std::move(diff)),
      max_degree_(max_degree),
      cache_(std::make_shared<Cache>()) {
  if (diff_.size() < basis_.size()) diff_.resize(basis_.size());
  for (auto& col : diff_)
    for (auto it = col.begin(); it != col.end();) it = it->second.is_zero() ? col.erase(it) : std::next(it);
  validate();
}

void SemifreeModule::validate() const {
  if (diff_.size() != basis_.size())
    throw Error(ErrorKind::NotTriangular, "differential has more columns than basis elements");
  for (std::size_t l = 0; l < basis_.size(); ++l) {
    for (const auto& [m, b] : diff_[l]) {
      if (m >= l)
        throw Error(ErrorKind::NotTriangular, "d(" + basis_[l].name + ") involves " +
                                                  (m < basis_.size() ? basis_[m].name : std::to_string(m)));
      if (!(b.owner() == alg_)) throw Error(ErrorKind::OwnerMismatch, "differential entry over another algebra");
      const int want = basis_[l].degree - 1 - basis_[m].degree;
      const auto got = b.degree();
      if (!got || *got != want)
        throw Error(ErrorKind::DegreeMismatch, "coefficient of " + basis_[m].name + " in d(" + basis_[l].name +
                                                   ") should have degree " + std::to_string(want));
    }
  }
  for (std::size_t l = 0; l < basis_.size(); ++l) {
    const ModuleVector dd = apply_differential(apply_differential(generator(l)));
    for (const auto& x : dd)
      if (!x.is_zero()) throw Error(ErrorKind::DSquaredNonzero, "d^2(" + basis_[l].name + ") != 0");
  }
}

Element SemifreeModule::entry(std::size_t m, std::size_t l) const {
  const auto& col = diff_.at(l);
  auto it = col.find(m);
  return it == col.end() ? alg_.zero() : it->second;
}

SemifreeModule SemifreeModule::with_max_degree(int cap) const {
  SemifreeModule out = *this;
  out.max_degree_ = cap;
  out.cache_ = std::make_shared<Cache>();
  return out;
}

int SemifreeModule::bottom_degree() const {
  if (basis_.empty()) return 0;
  int d = basis_[0].degree;
  for (const auto& b : basis_) d = std::min(d, b.degree);
  return d;
}

int SemifreeModule::top_degree() const {
  if (basis_.empty()) return 0;
  int d = basis_[0].degree;
  for (const auto& b : basis_) d = std::max(d, b.degree);
  return d;
}

ModuleVector SemifreeModule::zero_vector() const { return ModuleVector(basis_.size(), alg_.zero()); }

ModuleVector SemifreeModule::generator(std::size_t l) const {
  ModuleVector v = zero_vector();
  v.at(l) = alg_.one();
  return v;
}

ModuleVector SemifreeModule::apply_differential(const ModuleVector& v) const {
  ModuleVector out = zero_vector();
  const Field& f = alg_.field();
  for (std::size_t l = 0; l < v.size(); ++l) {
    if (v[l].is_zero()) continue;
    for (const auto& [m, b] : diff_[l]) out[m] += b * v[l];
    out[l] += v[l].d() * sign_scalar(f, basis_[l].degree);
  }
  return out;
}

ModuleVector SemifreeModule::act(const ModuleVector& v, const Element& b) const {
  ModuleVector out = v;
  for (auto& x : out) x = x * b;
  return out;
}

const GradedPiece& SemifreeModule::piece(int d) const {
  if (d > max_degree_)
    throw Error(ErrorKind::CapExceeded,
                "module degree " + std::to_string(d) + " above cap " + std::to_string(max_degree_));
  std::lock_guard lock(cache_->mu);
  auto it = cache_->pieces.find(d);
  if (it != cache_->pieces.end()) return it->second;
  GradedPiece p;
  for (std::size_t l = 0; l < basis_.size(); ++l) {
    for (const auto& m : alg_.basis_in_degree(d - basis_[l].degree)) {
      p.index.emplace(std::pair(l, m), p.basis.size());
      p.basis.emplace_back(l, m);
    }
  }
  return cache_->pieces.emplace(d, std::move(p)).first->second;
}

SparseMatrix SemifreeModule::differential_matrix(int d) const {
  const GradedPiece& src = piece(d);
  const GradedPiece& dst = piece(d - 1);
  SparseMatrix out(dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    const auto& [l, m] = src.basis[j];
    ModuleVector v = zero_vector();
    v[l] = alg_.monomial(m, Scalar::one(alg_.field()));
    out.set_column(j, coordinates(apply_differential(v), d - 1));
  }
  return out;
}

SparseMatrix SemifreeModule::right_action_matrix(const Monomial& mono, int d) const {
  const int shift = alg_.degree(mono);
  const GradedPiece& src = piece(d);
  const GradedPiece& dst = piece(d + shift);
  SparseMatrix out(dst.size(), src.size());
  const Field& f = alg_.field();
  for (std::size_t j = 0; j < src.size(); ++j) {
    const auto& [l, m] = src.basis[j];
    auto p = alg_.multiply(m, mono);
    if (p) out.add(dst.index.at({l, p->second}), j, Scalar(f, static_cast<long>(p->first)));
  }
  return out;
}

SparseVec SemifreeModule::coordinates(const ModuleVector& v, int d) const {
  const GradedPiece& p = piece(d);
  SparseVec out;
  for (std::size_t l = 0; l < v.size(); ++l) {
    for (const auto& [m, c] : v[l].terms()) {
      auto it = p.index.find({l, m});
      if (it == p.index.end())
        throw std::invalid_argument("coordinates: module element is not homogeneous of degree " + std::to_string(d));
      out.add(it->second, c);
    }
  }
  return out;
}

ModuleVector SemifreeModule::from_coordinates(const SparseVec& x, int d) const {
  const GradedPiece& p = piece(d);
  ModuleVector v = zero_vector();
  for (const auto& [i, c] : x.entries()) {
    const auto& [l, m] = p.basis.at(i);
    v[l] += alg_.monomial(m, c);
  }
  return v;
}

std::string chain_map_defect(const SemifreeModule& source, const SemifreeModule& target, int shift,
                             const std::vector<ModuleVector>& images) {
  if (images.size() != source.rank()) return "expected one image per source basis element";
  const Field& f = source.algebra().field();
  for (std::size_t l = 0; l < images.size(); ++l) {
    if (images[l].size() != target.rank()) return "image of " + source.basis_element(l).name + " has wrong length";
    for (std::size_t m = 0; m < target.rank(); ++m) {
      if (images[l][m].is_zero()) continue;
      const int want = source.basis_element(l).degree - shift - target.basis_element(m).degree;
      const auto got = images[l][m].degree();
      if (!got || *got != want)
        return "coefficient of " + target.basis_element(m).name + " in f(" + source.basis_element(l).name +
               ") should have degree " + std::to_string(want);
    }
  }
  for (std::size_t l = 0; l < images.size(); ++l) {
    ModuleVector lhs = target.apply_differential(images[l]);
    for (auto& x : lhs) x = x * sign_scalar(f, shift);
    ModuleVector rhs = target.zero_vector();
    for (const auto& [m, b] : source.differential_column(l))
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += images[m][k] * b;
    for (std::size_t k = 0; k < rhs.size(); ++k)
      if (lhs[k] != rhs[k]) return "chain condition fails on " + source.basis_element(l).name;
  }
  return {};
}

ChainMap::ChainMap(SemifreeModule source, SemifreeModule target, int shift, std::vector<ModuleVector> images)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift), images_(std::move(images)) {
  if (!(source_.algebra() == target_.algebra())) throw Error(ErrorKind::OwnerMismatch, "chain map between algebras");
  const std::string defect = chain_map_defect(source_, target_, shift_, images_);
  if (!defect.empty()) {
    const bool degree = defect.find("degree") != std::string::npos || defect.find("length") != std::string::npos ||
                        defect.find("expected") != std::string::npos;
    throw Error(degree ? ErrorKind::DegreeMismatch : ErrorKind::NotAChainMap, defect);
  }
}

ModuleVector ChainMap::apply(const ModuleVector& v) const {
  ModuleVector out = target_.zero_vector();
  for (std::size_t l = 0; l < v.size(); ++l) {
    if (v[l].is_zero()) continue;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += images_[l][k] * v[l];
  }
  return out;
}

SemifreeModule shift(const SemifreeModule& m, int i) {
  std::vector<BasisElement> basis = m.basis();
  for (auto& b : basis) b.degree += i;
  std::vector<std::map<std::size_t, Element>> diff(m.rank());
  const Scalar s = sign_scalar(m.algebra().field(), i);
  for (std::size_t l = 0; l < m.rank(); ++l)
    for (const auto& [k, b] : m.differential_column(l)) diff[l].emplace(k, b * s);
  return SemifreeModule(m.algebra(), std::move(basis), std::move(diff), m.max_degree());
}

SemifreeModule direct_sum(const SemifreeModule& a, const SemifreeModule& b) {
  if (!(a.algebra() == b.algebra())) throw Error(ErrorKind::OwnerMismatch, "direct sum over different algebras");
  std::vector<BasisElement> basis = a.basis();
  basis.insert(basis.end(), b.basis().begin(), b.basis().end());
  std::vector<std::map<std::size_t, Element>> diff;
  for (std::size_t l = 0; l < a.rank(); ++l) diff.push_back(a.differential_column(l));
  for (std::size_t l = 0; l < b.rank(); ++l) {
    std::map<std::size_t, Element> col;
    for (const auto& [k, x] : b.differential_column(l)) col.emplace(k + a.rank(), x);
    diff.push_back(std::move(col));
  }
  return SemifreeModule(a.algebra(), std::move(basis), std::move(diff), std::min(a.max_degree(), b.max_degree()));
}

SemifreeModule free_module(const Algebra& alg, const std::vector<int>& degrees, int max_degree) {
  std::vector<BasisElement> basis;
  for (std::size_t i = 0; i < degrees.size(); ++i) basis.push_back({"e" + std::to_string(i), degrees[i]});
  return SemifreeModule(alg, std::move(basis), std::vector<std::map<std::size_t, Element>>(degrees.size()),
                        max_degree);
}

ChainMap identity_map(const SemifreeModule& m) {
  std::vector<ModuleVector> images;
  for (std::size_t l = 0; l < m.rank(); ++l) images.push_back(m.generator(l));
  return ChainMap(m, m, 0, std::move(images));
}

ChainMap zero_map(const SemifreeModule& source, const SemifreeModule& target, int shift) {
  return ChainMap(source, target, shift, std::vector<ModuleVector>(source.rank(), target.zero_vector()));
}

std::vector<std::size_t> triangular_order(const std::vector<std::map<std::size_t, Element>>& diff) {
  const std::size_t n = diff.size();
  std::vector<std::vector<std::size_t>> dependents(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t l = 0; l < n; ++l) {
    for (const auto& [m, b] : diff[l]) {
      if (b.is_zero()) continue;
      if (m == l) throw Error(ErrorKind::TriangularityUnrepairable, "basis element occurs in its own differential");
      dependents[m].push_back(l);
      ++pending[l];
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t l = 0; l < n; ++l)
    if (pending[l] == 0) ready.push(l);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t l = ready.top();
    ready.pop();
    order.push_back(l);
    for (std::size_t k : dependents[l])
      if (--pending[k] == 0) ready.push(k);
  }
  if (order.size() != n) throw Error(ErrorKind::TriangularityUnrepairable, "differential has a cycle");
  return order;
}

SemifreeModule cone(const ChainMap& f) {
  if (f.shift() != 0) throw std::invalid_argument("cone: chain map must have shift 0");
  const SemifreeModule& n = f.source();
  const SemifreeModule& m = f.target();
  const std::size_t ns = n.rank();
  std::vector<BasisElement> basis;
  std::vector<std::map<std::size_t, Element>> diff;
  for (std::size_t l = 0; l < ns; ++l) {
    basis.push_back({"s" + n.basis_element(l).name, n.basis_element(l).degree + 1});
    std::map<std::size_t, Element> col;
    for (const auto& [k, b] : n.differential_column(l)) col.emplace(k, -b);
    for (std::size_t k = 0; k < m.rank(); ++k)
      if (!f.image(l)[k].is_zero()) col.emplace(ns + k, f.image(l)[k]);
    diff.push_back(std::move(col));
  }
  for (std::size_t l = 0; l < m.rank(); ++l) {
    basis.push_back(m.basis_element(l));
    std::map<std::size_t, Element> col;
    for (const auto& [k, b] : m.differential_column(l)) col.emplace(ns + k, b);
    diff.push_back(std::move(col));
  }
  const std::vector<std::size_t> order = triangular_order(diff);
  std::vector<std::size_t> position(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  std::vector<BasisElement> sorted_basis;
  std::vector<std::map<std::size_t, Element>> sorted_diff;
  for (std::size_t old : order) {
    sorted_basis.push_back(basis[old]);
    std::map<std::size_t, Element> col;
    for (const auto& [k, b] : diff[old]) col.emplace(position[k], b);
    sorted_diff.push_back(std::move(col));
  }
  return SemifreeModule(n.algebra(), std::move(sorted_basis), std::move(sorted_diff),
                        std::min(n.max_degree(), m.max_degree()));
}

BaseChange base_change(const SemifreeModule& n, int generator_bound) {
  if (generator_bound > n.max_degree())
    throw Error(ErrorKind::CapExceeded, "base change generator bound " + std::to_string(generator_bound) +
                                            " above cap " + std::to_string(n.max_degree()));
  const Algebra& alg = n.algebra();
  const Field& f = alg.field();
  std::vector<std::pair<std::size_t, Monomial>> gens;
  std::map<std::pair<std::size_t, Monomial>, std::size_t> index;
  std::vector<BasisElement> basis;
  for (std::size_t l = 0; l < n.rank(); ++l) {
    const int dl = n.basis_element(l).degree;
    for (int t = 0; dl + t <= generator_bound; ++t) {
      for (const auto& w : alg.extra_basis(t)) {
        index.emplace(std::pair(l, w), gens.size());
        gens.emplace_back(l, w);
        const std::string name = w.is_one() ? n.basis_element(l).name : n.basis_element(l).name + "*" + alg.format(w);
        basis.push_back({name, dl + t});
      }
    }
  }
  std::vector<std::map<std::size_t, Element>> diff(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const auto& [l, w] = gens[g];
    ModuleVector v = n.zero_vector();
    v[l] = alg.monomial(w, Scalar::one(f));
    const ModuleVector dv = n.apply_differential(v);
    for (std::size_t m = 0; m < dv.size(); ++m) {
      for (const auto& [mono, c] : dv[m].terms()) {
        auto [a, x] = alg.split(mono);
        // e_m (a x) = (-1)^{|a||x|} (e_m x) a
        const Scalar s = c * sign_scalar(f, alg.degree(a) * alg.degree(x));
        const std::size_t target = index.at({m, x});
        auto [it, inserted] = diff[g].try_emplace(target, alg.monomial(a, s));
        if (!inserted) it->second += alg.monomial(a, s);
      }
    }
  }
  SemifreeModule module(alg, std::move(basis), std::move(diff), n.max_degree());
  std::vector<ModuleVector> images;
  for (const auto& [l, w] : gens) {
    ModuleVector v = n.zero_vector();
    v[l] = alg.monomial(w, Scalar::one(f));
    images.push_back(std::move(v));
  }
  ChainMap counit(module, n, 0, std::move(images));
  bool complete = true;
  if (const auto top = alg.max_extra_degree()) {
    for (const auto& b : n.basis()) complete = complete && b.degree + *top <= generator_bound;
  } else {
    complete = n.rank() == 0;
  }
  return BaseChange{std::move(module), std::move(counit), std::move(gens), generator_bound, complete};
}

std::size_t homology_dim(const SemifreeModule& m, int d) {
  const std::size_t dim = m.dim(d);
  const std::size_t out_rank = rank(m.differential_matrix(d));
  const std::size_t in_rank = rank(m.differential_matrix(d + 1));
  return dim - out_rank - in_rank;
}

}  // namespace dglift
