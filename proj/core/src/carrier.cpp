#include "dglift/carrier.hpp"

namespace dglift {

AlgebraCarrier::AlgebraCarrier(Algebra alg, int max_degree) : alg_(std::move(alg)), max_degree_(max_degree) {}

void AlgebraCarrier::check(int d) const {
  if (d > max_degree_)
    throw Error(ErrorKind::CapExceeded, "algebra degree " + std::to_string(d) + " above cap " + std::to_string(max_degree_));
}

std::size_t AlgebraCarrier::dim(int d) const {
  check(d);
  return alg_.basis_in_degree(d).size();
}

SparseMatrix AlgebraCarrier::differential(int d) const {
  const auto& src = alg_.basis_in_degree(d);
  SparseMatrix out(dim(d - 1), dim(d));
  for (std::size_t j = 0; j < src.size(); ++j)
    for (const auto& [m, c] : alg_.differential(src[j])) out.add(alg_.index_in_degree(m), j, c);
  return out;
}

namespace {

SparseMatrix multiplication(const Algebra& alg, const Monomial& m, int d, bool left, std::size_t rows) {
  const auto& src = alg.basis_in_degree(d);
  SparseMatrix out(rows, src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    auto p = left ? alg.multiply(m, src[j]) : alg.multiply(src[j], m);
    if (p) out.add(alg.index_in_degree(p->second), j, Scalar(alg.field(), static_cast<long>(p->first)));
  }
  return out;
}

}  // namespace

SparseMatrix AlgebraCarrier::left_action(const Monomial& m, int d) const {
  const std::size_t rows = dim(d + alg_.degree(m));
  return multiplication(alg_, m, d, true, rows);
}

SparseMatrix AlgebraCarrier::right_action(const Monomial& m, int d) const {
  const std::size_t rows = dim(d + alg_.degree(m));
  return multiplication(alg_, m, d, false, rows);
}

}  // namespace dglift
