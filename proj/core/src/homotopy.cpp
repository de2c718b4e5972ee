#include "dglift/homotopy.hpp"

#include <algorithm>
#include <stdexcept>

namespace dglift {

namespace {

void add_block(SparseMatrix& out, const SparseMatrix& block, std::size_t row0, std::size_t col0, const Scalar& c) {
  for (std::size_t j = 0; j < block.cols(); ++j)
    for (const auto& [i, v] : block.column(j).entries()) out.add(row0 + i, col0 + j, v * c);
}

Scalar sign(const Field& f, int e) { return (e % 2 == 0) ? Scalar::one(f) : -Scalar::one(f); }

ModuleVector add_vectors(ModuleVector a, const ModuleVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

const AlgebraCarrier& require_algebra_carrier(const TargetSpace& t) {
  const auto* c = dynamic_cast<const AlgebraCarrier*>(&t.carrier());
  if (c == nullptr) throw std::logic_error("module vectors need a target with Y = B");
  return *c;
}

}  // namespace

TargetSpace::TargetSpace(SemifreeModule module, std::shared_ptr<const Carrier> carrier, int shift)
    : module_(std::move(module)), carrier_(std::move(carrier)), shift_(shift) {
  if (!(carrier_->algebra() == module_.algebra()))
    throw Error(ErrorKind::OwnerMismatch, "carrier and module live over different algebras");
}

std::size_t TargetSpace::offset(int d, std::size_t mu) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < mu; ++i) off += carrier_->dim(carrier_degree(d, i));
  return off;
}

std::size_t TargetSpace::dim(int d) const { return offset(d, module_.rank()); }

SparseMatrix TargetSpace::differential(int d) const {
  const Field& f = module_.algebra().field();
  SparseMatrix out(dim(d - 1), dim(d));
  const Scalar outer = sign(f, shift_);
  for (std::size_t mu = 0; mu < module_.rank(); ++mu) {
    const int cd = carrier_degree(d, mu);
    if (carrier_->dim(cd) == 0) continue;
    const std::size_t col0 = offset(d, mu);
    add_block(out, carrier_->differential(cd), offset(d - 1, mu), col0,
              outer * sign(f, module_.basis_element(mu).degree));
    for (const auto& [nu, b] : module_.differential_column(mu))
      for (const auto& [m, c] : b.terms())
        add_block(out, carrier_->left_action(m, cd), offset(d - 1, nu), col0, outer * c);
  }
  return out;
}

SparseMatrix TargetSpace::right_action(const Element& b, int d) const {
  const auto deg = b.degree();
  const int k = deg.value_or(0);
  SparseMatrix out(dim(d + k), dim(d));
  if (b.is_zero()) return out;
  if (!deg) throw std::invalid_argument("right action by an inhomogeneous element");
  for (std::size_t mu = 0; mu < module_.rank(); ++mu) {
    const int cd = carrier_degree(d, mu);
    if (carrier_->dim(cd) == 0) continue;
    for (const auto& [m, c] : b.terms()) add_block(out, carrier_->right_action(m, cd), offset(d + k, mu), offset(d, mu), c);
  }
  return out;
}

TargetSpace module_target(const SemifreeModule& m, int shift) {
  return TargetSpace(m, std::make_shared<AlgebraCarrier>(m.algebra(), m.max_degree()), shift);
}

HomSpace::HomSpace(SemifreeModule source, TargetSpace target) : source_(std::move(source)), target_(std::move(target)) {
  if (!(source_.algebra() == target_.module().algebra()))
    throw Error(ErrorKind::OwnerMismatch, "source and target live over different algebras");
  const Field& f = source_.algebra().field();
  const std::size_t r = source_.rank();
  auto deg = [&](std::size_t l) { return source_.basis_element(l).degree; };

  map_offsets_.assign(1, 0);
  homotopy_offsets_.assign(1, 0);
  std::vector<std::size_t> defect_offsets{0};
  for (std::size_t l = 0; l < r; ++l) {
    map_offsets_.push_back(map_offsets_.back() + target_.dim(deg(l)));
    homotopy_offsets_.push_back(homotopy_offsets_.back() + target_.dim(deg(l) + 1));
    defect_offsets.push_back(defect_offsets.back() + target_.dim(deg(l) - 1));
  }

  // d f(e_l) - sum_m f(e_m) b_ml = 0
  constraints_ = SparseMatrix(defect_offsets.back(), map_size());
  // (dh + hd)(e_l) = d h(e_l) + sum_m h(e_m) b_ml
  boundary_ = SparseMatrix(map_size(), homotopy_size());
  const Scalar one = Scalar::one(f);
  for (std::size_t l = 0; l < r; ++l) {
    add_block(constraints_, target_.differential(deg(l)), defect_offsets[l], map_offsets_[l], one);
    add_block(boundary_, target_.differential(deg(l) + 1), map_offsets_[l], homotopy_offsets_[l], one);
    for (const auto& [m, b] : source_.differential_column(l)) {
      add_block(constraints_, target_.right_action(b, deg(m)), defect_offsets[l], map_offsets_[m], -one);
      add_block(boundary_, target_.right_action(b, deg(m) + 1), map_offsets_[l], homotopy_offsets_[m], one);
    }
  }
  if (constraints_.compose(boundary_).nnz() != 0) throw std::logic_error("boundaries are not cycles");

  cycles_ = kernel_basis(f, constraints_);
  Echelon ech;
  for (std::size_t j = 0; j < boundary_.cols(); ++j)
    if (ech.insert(boundary_.column(j))) boundaries_.push_back(boundary_.column(j));
  for (const auto& z : cycles_)
    if (ech.insert(z)) classes_.push_back(z);
  std::vector<SparseVec> span = boundaries_;
  span.insert(span.end(), classes_.begin(), classes_.end());
  class_span_ = SpanCoordinates(f, span);
}

std::optional<SparseVec> HomSpace::null_homotopy(const SparseVec& f) const {
  return solve(source_.algebra().field(), boundary_, f);
}

SparseVec HomSpace::class_coordinates(const SparseVec& f) const {
  if (!is_chain_map(f)) throw std::invalid_argument("class of a non-cycle");
  auto c = class_span_.coordinates(f);
  if (!c) throw std::logic_error("cycle outside the span of boundaries and classes");
  SparseVec out;
  const std::size_t nb = boundaries_.size();
  for (const auto& [i, v] : c->entries())
    if (i >= nb) out.add(i - nb, v);
  return out;
}

HomSpace chain_map_space(const SemifreeModule& m, const SemifreeModule& n, int shift) {
  return HomSpace(m, module_target(n, shift));
}

std::size_t hom_K_dim(const SemifreeModule& m, const SemifreeModule& n, int shift) {
  return chain_map_space(m, n, shift).dim();
}

namespace {

SparseVec encode_blocks(const HomSpace& space, const std::vector<ModuleVector>& images, int extra) {
  const TargetSpace& t = space.target();
  const Algebra& alg = t.module().algebra();
  require_algebra_carrier(t);
  if (images.size() != space.source().rank()) throw std::invalid_argument("one image per source generator expected");
  SparseVec out;
  for (std::size_t l = 0; l < images.size(); ++l) {
    const int d = space.source().basis_element(l).degree + extra;
    const std::size_t base = extra == 0 ? space.map_offset(l) : space.homotopy_offset(l);
    if (images[l].size() != t.module().rank()) throw std::invalid_argument("image has the wrong length");
    for (std::size_t mu = 0; mu < images[l].size(); ++mu) {
      for (const auto& [m, c] : images[l][mu].terms()) {
        if (alg.degree(m) != t.carrier_degree(d, mu))
          throw Error(ErrorKind::DegreeMismatch, "image of generator " + std::to_string(l) + " has the wrong degree");
        out.add(base + t.offset(d, mu) + alg.index_in_degree(m), c);
      }
    }
  }
  return out;
}

std::vector<ModuleVector> decode_blocks(const HomSpace& space, const SparseVec& v, int extra) {
  const TargetSpace& t = space.target();
  const Algebra& alg = t.module().algebra();
  require_algebra_carrier(t);
  std::vector<ModuleVector> out;
  for (std::size_t l = 0; l < space.source().rank(); ++l) {
    const int d = space.source().basis_element(l).degree + extra;
    const std::size_t base = extra == 0 ? space.map_offset(l) : space.homotopy_offset(l);
    ModuleVector img = t.module().zero_vector();
    for (std::size_t mu = 0; mu < img.size(); ++mu) {
      const std::size_t lo = base + t.offset(d, mu);
      const auto& basis = alg.basis_in_degree(t.carrier_degree(d, mu));
      for (const auto& [i, c] : v.entries())
        if (i >= lo && i < lo + basis.size()) img[mu] += alg.monomial(basis[i - lo], c);
    }
    out.push_back(std::move(img));
  }
  return out;
}

}  // namespace

SparseVec encode_images(const HomSpace& space, const std::vector<ModuleVector>& images) {
  return encode_blocks(space, images, 0);
}

std::vector<ModuleVector> decode_images(const HomSpace& space, const SparseVec& f) { return decode_blocks(space, f, 0); }

std::vector<ModuleVector> decode_homotopy(const HomSpace& space, const SparseVec& h) {
  return decode_blocks(space, h, 1);
}

ChainMap map_from_vector(const HomSpace& space, const SparseVec& f) {
  return ChainMap(space.source(), space.target().module(), space.target().shift(), decode_images(space, f));
}

std::optional<HomotopyWitness> is_null_homotopic(const ChainMap& f) {
  HomSpace space = chain_map_space(f.source(), f.target(), f.shift());
  auto h = space.null_homotopy(encode_images(space, f.images()));
  if (!h) return std::nullopt;
  HomotopyWitness w{decode_homotopy(space, *h)};

  // Independent recheck: (-1)^s d_M h(e_l) + sum_m h(e_m) b_ml = f(e_l).
  const SemifreeModule& src = f.source();
  const SemifreeModule& tgt = f.target();
  const Field& fld = src.algebra().field();
  for (std::size_t l = 0; l < src.rank(); ++l) {
    ModuleVector lhs = tgt.apply_differential(w.h[l]);
    for (auto& e : lhs) e = e * sign(fld, f.shift());
    for (const auto& [m, b] : src.differential_column(l)) lhs = add_vectors(lhs, tgt.act(w.h[m], b));
    if (lhs != f.image(l)) throw std::logic_error("null-homotopy witness failed its recheck");
  }
  return w;
}

bool AR1Report::holds() const { return nonnegative && perfect != Perfectness::Unverified && !first_failure; }

std::string to_string(Perfectness p) {
  switch (p) {
    case Perfectness::Verified:
      return "verified";
    case Perfectness::Asserted:
      return "user-asserted";
    case Perfectness::Unverified:
      return "unverified";
  }
  return "?";
}

AR1Report check_AR1(const SemifreeModule& n) {
  AR1Report r;
  r.nonnegative = n.rank() == 0 || n.bottom_degree() >= 0;
  const Algebra& alg = n.algebra();
  if (alg.a_prefix() > 0) {
    r.perfect = Perfectness::Asserted;
  } else if (alg.max_extra_degree()) {
    // A is the base ring and N|_A is a bounded complex of finite free A-modules.
    r.perfect = Perfectness::Verified;
  }
  SemifreeModule free_b = free_module(alg, {0}, n.max_degree());
  r.bound = n.rank() == 0 ? 0 : std::max(0, n.top_degree());
  for (int k = 1; k <= r.bound; ++k) {
    const std::size_t d = hom_K_dim(n, free_b, k);
    r.hom_dims.emplace_back(k, d);
    if (d != 0 && !r.first_failure) r.first_failure = k;
  }
  return r;
}

AR2Report check_AR2(const SemifreeModule& n) {
  AR2Report r;
  if (n.rank() > 0) r.bound = std::max({0, n.top_degree(), n.top_degree() - n.bottom_degree()});
  for (int k = 1; k <= r.bound; ++k) {
    const std::size_t d = hom_K_dim(n, n, k);
    r.hom_dims.emplace_back(k, d);
    if (d != 0 && !r.first_failure) r.first_failure = k;
  }
  return r;
}

}  // namespace dglift
