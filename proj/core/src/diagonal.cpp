#include "dglift/diagonal.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

namespace dglift {

namespace tensor {

int degree(const Algebra& alg, const TensorKey& k) {
  int d = 0;
  for (const auto& m : k) d += alg.degree(m);
  return d;
}

void add_normalized(const Algebra& alg, TensorTerms& out, TensorKey raw, const Scalar& c) {
  if (c.is_zero()) return;
  int sign = 1;
  for (std::size_t i = raw.size(); i-- > 1;) {
    auto [a, x] = alg.split(raw[i]);
    if (a.is_one()) continue;
    raw[i] = std::move(x);
    auto p = alg.multiply(raw[i - 1], a);
    if (!p) return;
    sign *= p->first;
    raw[i - 1] = std::move(p->second);
  }
  const Scalar s = sign > 0 ? c : -c;
  auto [it, inserted] = out.try_emplace(std::move(raw), s);
  if (!inserted) {
    it->second += s;
    if (it->second.is_zero()) out.erase(it);
  }
}

void add(TensorTerms& out, const TensorTerms& x, const Scalar& c) {
  if (c.is_zero()) return;
  for (const auto& [k, v] : x) {
    auto [it, inserted] = out.try_emplace(k, v * c);
    if (!inserted) {
      it->second += v * c;
      if (it->second.is_zero()) out.erase(it);
    }
  }
}

TensorTerms scaled(const TensorTerms& x, const Scalar& c) {
  TensorTerms out;
  add(out, x, c);
  return out;
}

TensorTerms pure(const Algebra& alg, TensorKey raw) {
  TensorTerms out;
  add_normalized(alg, out, std::move(raw), Scalar::one(alg.field()));
  return out;
}

TensorTerms differential(const Algebra& alg, const TensorTerms& x) {
  TensorTerms out;
  for (const auto& [k, c] : x) {
    int prefix = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const Scalar sc = prefix % 2 == 0 ? c : -c;
      for (const auto& [dm, dc] : alg.differential(k[i])) {
        TensorKey raw = k;
        raw[i] = dm;
        add_normalized(alg, out, std::move(raw), sc * dc);
      }
      prefix += alg.degree(k[i]);
    }
  }
  return out;
}

TensorTerms left_multiply(const Algebra& alg, const Monomial& b, const TensorTerms& x) {
  TensorTerms out;
  for (const auto& [k, c] : x) {
    auto p = alg.multiply(b, k[0]);
    if (!p) continue;
    TensorKey raw = k;
    raw[0] = p->second;
    add_normalized(alg, out, std::move(raw), p->first > 0 ? c : -c);
  }
  return out;
}

TensorTerms right_multiply(const Algebra& alg, const TensorTerms& x, const Monomial& b) {
  TensorTerms out;
  for (const auto& [k, c] : x) {
    auto p = alg.multiply(k.back(), b);
    if (!p) continue;
    TensorKey raw = k;
    raw.back() = p->second;
    add_normalized(alg, out, std::move(raw), p->first > 0 ? c : -c);
  }
  return out;
}

TensorTerms multiply_first_two(const Algebra& alg, const TensorTerms& x) {
  TensorTerms out;
  for (const auto& [k, c] : x) {
    if (k.size() < 2) throw std::invalid_argument("multiply_first_two: need at least two factors");
    auto p = alg.multiply(k[0], k[1]);
    if (!p) continue;
    TensorKey raw(k.begin() + 1, k.end());
    raw[0] = p->second;
    add_normalized(alg, out, std::move(raw), p->first > 0 ? c : -c);
  }
  return out;
}

TensorTerms concatenate(const Algebra& alg, const TensorTerms& x, const TensorTerms& y) {
  TensorTerms out;
  for (const auto& [kx, cx] : x) {
    for (const auto& [ky, cy] : y) {
      auto p = alg.multiply(kx.back(), ky.front());
      if (!p) continue;
      TensorKey raw(kx.begin(), kx.end() - 1);
      raw.push_back(p->second);
      raw.insert(raw.end(), ky.begin() + 1, ky.end());
      const Scalar c = cx * cy;
      add_normalized(alg, out, std::move(raw), p->first > 0 ? c : -c);
    }
  }
  return out;
}

TensorTerms envelope_multiply(const Algebra& alg, const TensorTerms& x, const TensorTerms& y) {
  TensorTerms out;
  for (const auto& [kx, cx] : x) {
    for (const auto& [ky, cy] : y) {
      if (kx.size() != 2 || ky.size() != 2) throw std::invalid_argument("envelope_multiply: not in B^e");
      auto first = alg.multiply(kx[0], ky[0]);
      auto second = alg.multiply(kx[1], ky[1]);
      if (!first || !second) continue;
      int sign = first->first * second->first;
      if ((alg.degree(ky[0]) * alg.degree(kx[1])) % 2 != 0) sign = -sign;
      const Scalar c = cx * cy;
      add_normalized(alg, out, {first->second, second->second}, sign > 0 ? c : -c);
    }
  }
  return out;
}

Element envelope_projection(const Algebra& alg, const TensorTerms& x) {
  Terms t;
  for (const auto& [k, c] : multiply_first_two(alg, x)) add_term(t, k[0], c);
  return Element(alg, std::move(t));
}

TensorTerms from_element(const Element& b) {
  TensorTerms out;
  for (const auto& [m, c] : b.terms()) out.emplace(TensorKey{m}, c);
  return out;
}

TensorTerms universal_derivation(const Element& b) {
  const Algebra& alg = b.owner();
  TensorTerms out;
  for (const auto& [m, c] : b.terms()) {
    add_normalized(alg, out, {m, alg.unit()}, c);
    add_normalized(alg, out, {alg.unit(), m}, -c);
  }
  return out;
}

std::string format(const Algebra& alg, const TensorTerms& x) {
  if (x.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : x) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i == 0 ? " " : "|") << alg.format(k[i]);
  }
  return os.str();
}

}  // namespace tensor

struct TensorTower::Cache {
  std::mutex mu;
  std::map<std::pair<int, int>, Ambient> ambient;
  std::map<std::pair<int, int>, Piece> pieces;
  std::map<std::tuple<int, int, int, Monomial>, SparseMatrix> matrices;
};

TensorTower::TensorTower(Algebra alg, int max_degree, int max_tensor)
    : alg_(std::move(alg)), max_degree_(max_degree), max_tensor_(max_tensor), cache_(std::make_shared<Cache>()) {}

void TensorTower::check_range(int n, int d) const {
  if (n < 0) throw std::invalid_argument("negative tensor power");
  if (n > max_tensor_)
    throw Error(ErrorKind::CapExceeded, "tensor power " + std::to_string(n) + " above cap " + std::to_string(max_tensor_));
  if (d > max_degree_)
    throw Error(ErrorKind::CapExceeded, "tensor degree " + std::to_string(d) + " above cap " + std::to_string(max_degree_));
}

const TensorTower::Ambient& TensorTower::ambient(int n, int d) const {
  check_range(n, d);
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->ambient.find({n, d});
    if (it != cache_->ambient.end()) return it->second;
  }
  Ambient a;
  if (d >= 0) {
    TensorKey key(static_cast<std::size_t>(n) + 1);
    auto rec = [&](auto&& self, int slot, int remaining) -> void {
      if (slot == n) {
        for (const auto& m : alg_.basis_in_degree(remaining)) {
          key[0] = m;
          a.keys.push_back(key);
        }
        return;
      }
      for (int t = 0; t <= remaining; ++t) {
        for (const auto& x : alg_.extra_basis(t)) {
          key[static_cast<std::size_t>(n - slot)] = x;
          self(self, slot + 1, remaining - t);
        }
      }
    };
    rec(rec, 0, d);
    std::sort(a.keys.begin(), a.keys.end());
    for (std::size_t i = 0; i < a.keys.size(); ++i) a.index.emplace(a.keys[i], i);
  }
  std::lock_guard lock(cache_->mu);
  return cache_->ambient.try_emplace({n, d}, std::move(a)).first->second;
}

const std::vector<TensorKey>& TensorTower::ambient_basis(int n, int d) const { return ambient(n, d).keys; }

SparseVec TensorTower::ambient_coordinates(int n, int d, const TensorTerms& x) const {
  const Ambient& a = ambient(n, d);
  SparseVec v;
  for (const auto& [k, c] : x) {
    auto it = a.index.find(k);
    if (it == a.index.end())
      throw std::invalid_argument("ambient_coordinates: term " + tensor::format(alg_, {{k, c}}) +
                                  " not in degree " + std::to_string(d));
    v.add(it->second, c);
  }
  return v;
}

TensorTower::Piece TensorTower::build_piece(int n, int d) const {
  const Field& f = alg_.field();
  Piece p;
  std::vector<SparseVec> vecs;
  if (d < 0) return p;
  if (n == 0) {
    for (const auto& m : alg_.basis_in_degree(d)) p.basis.push_back(TensorTerms{{TensorKey{m}, Scalar::one(f)}});
  } else {
    // Middle term B (x)_A J^{(x)(n-1)}: extra monomial x on the left of each basis vector.
    std::vector<TensorTerms> middle;
    for (int t = 0; t <= d; ++t) {
      const auto& below = piece(n - 1, d - t).basis;
      for (const auto& x : alg_.extra_basis(t)) {
        for (const auto& y : below) {
          TensorTerms e;
          for (const auto& [k, c] : y) {
            TensorKey raw{x};
            raw.insert(raw.end(), k.begin(), k.end());
            tensor::add_normalized(alg_, e, std::move(raw), c);
          }
          middle.push_back(std::move(e));
        }
      }
    }
    SparseMatrix embed(ambient(n, d).keys.size(), middle.size());
    SparseMatrix mult(ambient(n - 1, d).keys.size(), middle.size());
    for (std::size_t j = 0; j < middle.size(); ++j) {
      embed.set_column(j, ambient_coordinates(n, d, middle[j]));
      mult.set_column(j, ambient_coordinates(n - 1, d, tensor::multiply_first_two(alg_, middle[j])));
    }
    if (rank(embed) != middle.size())
      throw Error(ErrorKind::NotExact, "B (x)_A J^" + std::to_string(n - 1) + " does not embed in degree " +
                                           std::to_string(d));
    if (rank(mult) != piece(n - 1, d).basis.size())
      throw Error(ErrorKind::NotExact, "multiplication onto J^" + std::to_string(n - 1) +
                                           " is not surjective in degree " + std::to_string(d));
    for (const auto& kv : kernel_basis(f, mult)) {
      TensorTerms v;
      for (const auto& [j, c] : kv.entries()) tensor::add(v, middle[j], c);
      p.basis.push_back(std::move(v));
    }
  }
  for (const auto& b : p.basis) vecs.push_back(ambient_coordinates(n, d, b));
  p.span = SpanCoordinates(f, vecs);
  return p;
}

const TensorTower::Piece& TensorTower::piece(int n, int d) const {
  check_range(n, d);
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->pieces.find({n, d});
    if (it != cache_->pieces.end()) return it->second;
  }
  Piece p = build_piece(n, d);
  std::lock_guard lock(cache_->mu);
  return cache_->pieces.try_emplace({n, d}, std::move(p)).first->second;
}

std::size_t TensorTower::dim(int n, int d) const { return piece(n, d).basis.size(); }

const std::vector<TensorTerms>& TensorTower::basis(int n, int d) const { return piece(n, d).basis; }

std::optional<SparseVec> TensorTower::coordinates(int n, int d, const TensorTerms& x) const {
  const Piece& p = piece(n, d);
  if (x.empty()) return SparseVec{};
  SparseVec amb;
  try {
    amb = ambient_coordinates(n, d, x);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return p.span.coordinates(amb);
}

TensorTerms TensorTower::from_coordinates(int n, int d, const SparseVec& v) const {
  const Piece& p = piece(n, d);
  TensorTerms out;
  for (const auto& [i, c] : v.entries()) tensor::add(out, p.basis.at(i), c);
  return out;
}

SparseMatrix TensorTower::map_matrix(int n_src, int d_src, int n_dst, int d_dst,
                                     const std::function<TensorTerms(const TensorTerms&)>& fn) const {
  const Piece& src = piece(n_src, d_src);
  const std::size_t rows = d_dst < 0 ? 0 : dim(n_dst, d_dst);
  SparseMatrix out(rows, src.basis.size());
  for (std::size_t j = 0; j < src.basis.size(); ++j) {
    TensorTerms image = fn(src.basis[j]);
    if (image.empty()) continue;
    auto c = coordinates(n_dst, d_dst, image);
    if (!c) throw std::logic_error("J^" + std::to_string(n_dst) + " is not closed under a structure map");
    out.set_column(j, std::move(*c));
  }
  return out;
}

SparseMatrix TensorTower::differential(int n, int d) const {
  const auto key = std::tuple(0, n, d, Monomial{});
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->matrices.find(key);
    if (it != cache_->matrices.end()) return it->second;
  }
  SparseMatrix m = map_matrix(n, d, n, d - 1, [&](const TensorTerms& x) { return tensor::differential(alg_, x); });
  std::lock_guard lock(cache_->mu);
  return cache_->matrices.try_emplace(key, std::move(m)).first->second;
}

SparseMatrix TensorTower::left_action(int n, const Monomial& mono, int d) const {
  const auto key = std::tuple(1, n, d, mono);
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->matrices.find(key);
    if (it != cache_->matrices.end()) return it->second;
  }
  SparseMatrix m = map_matrix(n, d, n, d + alg_.degree(mono),
                              [&](const TensorTerms& x) { return tensor::left_multiply(alg_, mono, x); });
  std::lock_guard lock(cache_->mu);
  return cache_->matrices.try_emplace(key, std::move(m)).first->second;
}

SparseMatrix TensorTower::right_action(int n, const Monomial& mono, int d) const {
  const auto key = std::tuple(2, n, d, mono);
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->matrices.find(key);
    if (it != cache_->matrices.end()) return it->second;
  }
  SparseMatrix m = map_matrix(n, d, n, d + alg_.degree(mono),
                              [&](const TensorTerms& x) { return tensor::right_multiply(alg_, x, mono); });
  std::lock_guard lock(cache_->mu);
  return cache_->matrices.try_emplace(key, std::move(m)).first->second;
}

SequenceCheck TensorTower::check_sequence(int n, int d) const {
  SequenceCheck r;
  r.n = n;
  r.degree = d;
  r.left_dim = dim(n + 1, d);
  r.right_dim = dim(n, d);
  std::vector<SparseVec> mult_cols;
  for (int t = 0; t <= d; ++t) {
    for (const auto& x : alg_.extra_basis(t)) {
      for (const auto& y : basis(n, d - t)) {
        TensorTerms e;
        for (const auto& [k, c] : y) {
          TensorKey raw{x};
          raw.insert(raw.end(), k.begin(), k.end());
          tensor::add_normalized(alg_, e, std::move(raw), c);
        }
        mult_cols.push_back(ambient_coordinates(n, d, tensor::multiply_first_two(alg_, e)));
      }
    }
  }
  r.middle_dim = mult_cols.size();
  SparseMatrix mult(ambient(n, d).keys.size(), mult_cols.size());
  for (std::size_t j = 0; j < mult_cols.size(); ++j) mult.set_column(j, mult_cols[j]);
  r.surjection_rank = rank(mult);

  if (n == 0) {
    // J (x)_B B = J.
    r.quotient_dim = r.left_dim;
    r.image_rank = r.left_dim;
    return r;
  }
  // V = sum_i J_i (x)_k J^{(x)n}_{d-i}, indexed by (i, a, c).
  std::vector<std::size_t> offset(static_cast<std::size_t>(d) + 2, 0);
  for (int i = 0; i <= d; ++i)
    offset[static_cast<std::size_t>(i) + 1] = offset[static_cast<std::size_t>(i)] + dim(1, i) * dim(n, d - i);
  const std::size_t vdim = offset.back();
  auto vindex = [&](int i, std::size_t a, std::size_t c) {
    return offset[static_cast<std::size_t>(i)] + a * dim(n, d - i) + c;
  };
  std::vector<SparseVec> relations;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; i + j <= d; ++j) {
      for (const auto& b : alg_.basis_in_degree(j)) {
        const SparseMatrix ra = right_action(1, b, i);
        const SparseMatrix la = left_action(n, b, d - i - j);
        for (std::size_t a = 0; a < dim(1, i); ++a) {
          for (std::size_t c = 0; c < dim(n, d - i - j); ++c) {
            SparseVec rel;
            for (const auto& [a2, s] : ra.column(a).entries()) rel.add(vindex(i + j, a2, c), s);
            for (const auto& [c2, s] : la.column(c).entries()) rel.add(vindex(i, a, c2), -s);
            if (!rel.empty()) relations.push_back(std::move(rel));
          }
        }
      }
    }
  }
  SparseMatrix rel(vdim, relations.size());
  for (std::size_t k = 0; k < relations.size(); ++k) rel.set_column(k, relations[k]);
  r.quotient_dim = vdim - rank(rel);

  const std::size_t rows = ambient(n + 1, d).keys.size();
  SparseMatrix phi(rows, vdim);
  for (int i = 0; i <= d; ++i)
    for (std::size_t a = 0; a < dim(1, i); ++a)
      for (std::size_t c = 0; c < dim(n, d - i); ++c)
        phi.set_column(vindex(i, a, c), ambient_coordinates(n + 1, d, tensor::concatenate(alg_, basis(1, i)[a],
                                                                                           basis(n, d - i)[c])));
  if (phi.compose(rel).nnz() != 0) throw std::logic_error("concatenation does not respect the balancing relations");
  r.image_rank = rank(phi);
  return r;
}

std::size_t TensorTower::concatenation_rank(int p, int q, int d) const {
  std::vector<SparseVec> cols;
  for (int i = 0; i <= d; ++i) {
    for (const auto& x : basis(p, i)) {
      for (const auto& y : basis(q, d - i)) {
        auto c = coordinates(p + q, d, tensor::concatenate(alg_, x, y));
        if (!c) throw std::logic_error("concatenation leaves J^" + std::to_string(p + q));
        cols.push_back(std::move(*c));
      }
    }
  }
  SparseMatrix m(dim(p + q, d), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return rank(m);
}

TensorPowerCarrier::TensorPowerCarrier(std::shared_ptr<const TensorTower> tower, int n)
    : tower_(std::move(tower)), n_(n) {
  if (n_ < 0 || n_ > tower_->max_tensor())
    throw Error(ErrorKind::CapExceeded, "tensor power " + std::to_string(n_) + " outside the tower");
}

}  // namespace dglift
