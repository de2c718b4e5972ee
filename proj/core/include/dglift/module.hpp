#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dglift/algebra.hpp"
#include "dglift/sparse.hpp"

namespace dglift {

inline constexpr int kDefaultMaxDegree = 16;

struct BasisElement {
  std::string name;
  int degree = 0;
};

/// Coefficient vector of a module element: entry i is the B-coefficient of e_i.
using ModuleVector = std::vector<Element>;

/// k-basis of a module in one DG degree: pairs (basis index, algebra monomial).
struct GradedPiece {
  std::vector<std::pair<std::size_t, Monomial>> basis;
  std::map<std::pair<std::size_t, Monomial>, std::size_t> index;
  std::size_t size() const { return basis.size(); }
};

/// Semifree right DG B-module with a finite ordered basis and strictly lower
/// triangular differential d(e_l) = sum_{m < l} e_m * b_{ml}.
class SemifreeModule {
 public:
  /// diff[l] maps m to b_{ml}. Throws NotTriangular, DegreeMismatch or DSquaredNonzero.
  SemifreeModule(Algebra alg, std::vector<BasisElement> basis, std::vector<std::map<std::size_t, Element>> diff,
                 int max_degree = kDefaultMaxDegree);

  const Algebra& algebra() const { return alg_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  const BasisElement& basis_element(std::size_t i) const { return basis_.at(i); }
  const std::map<std::size_t, Element>& differential_column(std::size_t l) const { return diff_.at(l); }
  Element entry(std::size_t m, std::size_t l) const;
  int max_degree() const { return max_degree_; }
  SemifreeModule with_max_degree(int cap) const;

  int bottom_degree() const;  // 0 for the zero module
  int top_degree() const;     // 0 for the zero module

  ModuleVector zero_vector() const;
  ModuleVector generator(std::size_t l) const;
  /// Applies d with the Leibniz rule d(e x) = d(e) x + (-1)^{|e|} e dx.
  ModuleVector apply_differential(const ModuleVector& v) const;
  /// v * b
  ModuleVector act(const ModuleVector& v, const Element& b) const;

  /// Throws CapExceeded when d is above max_degree().
  const GradedPiece& piece(int d) const;
  std::size_t dim(int d) const { return piece(d).size(); }
  /// Matrix of d from degree d to degree d - 1.
  SparseMatrix differential_matrix(int d) const;
  /// Matrix of right multiplication by m from degree d to degree d + |m|.
  SparseMatrix right_action_matrix(const Monomial& m, int d) const;
  SparseVec coordinates(const ModuleVector& v, int d) const;
  ModuleVector from_coordinates(const SparseVec& x, int d) const;

 private:
  void validate() const;

  Algebra alg_;
  std::vector<BasisElement> basis_;
  std::vector<std::map<std::size_t, Element>> diff_;
  int max_degree_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Degree-0 chain map N -> Sigma^s M, entry (m, l) the coefficient of e'_m in f(e_l).
class ChainMap {
 public:
  /// Throws DegreeMismatch or NotAChainMap.
  ChainMap(SemifreeModule source, SemifreeModule target, int shift, std::vector<ModuleVector> images);

  const SemifreeModule& source() const { return source_; }
  const SemifreeModule& target() const { return target_; }
  int shift() const { return shift_; }
  const ModuleVector& image(std::size_t l) const { return images_.at(l); }
  const std::vector<ModuleVector>& images() const { return images_; }

  /// f(v) for v in the source.
  ModuleVector apply(const ModuleVector& v) const;

 private:
  SemifreeModule source_;
  SemifreeModule target_;
  int shift_;
  std::vector<ModuleVector> images_;
};

/// Checks the degree and chain conditions for a proposed map; empty on success.
std::string chain_map_defect(const SemifreeModule& source, const SemifreeModule& target, int shift,
                             const std::vector<ModuleVector>& images);

SemifreeModule shift(const SemifreeModule& m, int i);
SemifreeModule direct_sum(const SemifreeModule& a, const SemifreeModule& b);
SemifreeModule free_module(const Algebra& alg, const std::vector<int>& degrees, int max_degree = kDefaultMaxDegree);
ChainMap identity_map(const SemifreeModule& m);
ChainMap zero_map(const SemifreeModule& source, const SemifreeModule& target, int shift);

/// Mapping cone of a degree-0 chain map f: N -> M with basis Sigma N then M,
/// re-sorted stably to restore triangularity.
SemifreeModule cone(const ChainMap& f);

/// Reorders a basis (with its differential) so that it becomes strictly lower
/// triangular, preferring the given order. Throws TriangularityUnrepairable.
std::vector<std::size_t> triangular_order(const std::vector<std::map<std::size_t, Element>>& diff);

struct BaseChange {
  SemifreeModule module;             // N|_A (x)_A B, truncated at generator degree `generator_bound`
  ChainMap counit;                   // pi_N
  std::vector<std::pair<std::size_t, Monomial>> generators;  // (l, w): e_l * w with w extra
  int generator_bound;
  bool complete;                     // no generators were dropped by the bound
};

/// Restriction to A followed by extension back to B. Throws CapExceeded when
/// generator_bound exceeds the module's max degree.
BaseChange base_change(const SemifreeModule& n, int generator_bound);

std::size_t homology_dim(const SemifreeModule& m, int d);

}  // namespace dglift
