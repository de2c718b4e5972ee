#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglift/carrier.hpp"
#include "dglift/module.hpp"
#include "dglift/sparse.hpp"

namespace dglift {

/// X = Sigma^s (M (x)_B Y) for a semifree M and a bimodule carrier Y. The
/// degree-d basis is the concatenation over mu of a basis of Y_{d - s - |e_mu|}.
class TargetSpace {
 public:
  TargetSpace(SemifreeModule module, std::shared_ptr<const Carrier> carrier, int shift);

  const SemifreeModule& module() const { return module_; }
  const Carrier& carrier() const { return *carrier_; }
  std::shared_ptr<const Carrier> carrier_ptr() const { return carrier_; }
  int shift() const { return shift_; }

  int carrier_degree(int d, std::size_t mu) const { return d - shift_ - module_.basis_element(mu).degree; }
  std::size_t dim(int d) const;
  /// Start of the block of e_mu inside X_d.
  std::size_t offset(int d, std::size_t mu) const;
  /// X_d -> X_{d-1}
  SparseMatrix differential(int d) const;
  /// x -> x b for homogeneous b, X_d -> X_{d+|b|}
  SparseMatrix right_action(const Element& b, int d) const;

 private:
  SemifreeModule module_;
  std::shared_ptr<const Carrier> carrier_;
  int shift_;
};

/// Sigma^s M with Y = B.
TargetSpace module_target(const SemifreeModule& m, int shift);

/// Degree-0 chain maps from a semifree source into X, modulo homotopy. A map is
/// a vector holding the coordinates of f(e_l) in X_{|e_l|}, block by block; a
/// homotopy h holds h(e_l) in X_{|e_l|+1}.
class HomSpace {
 public:
  HomSpace(SemifreeModule source, TargetSpace target);

  const SemifreeModule& source() const { return source_; }
  const TargetSpace& target() const { return target_; }

  std::size_t map_size() const { return map_offsets_.back(); }
  std::size_t homotopy_size() const { return homotopy_offsets_.back(); }
  std::size_t map_offset(std::size_t l) const { return map_offsets_.at(l); }
  std::size_t homotopy_offset(std::size_t l) const { return homotopy_offsets_.at(l); }

  /// Zero iff f is a chain map.
  SparseVec chain_defect(const SparseVec& f) const { return constraints_.apply(f); }
  bool is_chain_map(const SparseVec& f) const { return chain_defect(f).empty(); }
  /// dh + hd
  SparseVec boundary(const SparseVec& h) const { return boundary_.apply(h); }

  const std::vector<SparseVec>& cycles() const { return cycles_; }
  const std::vector<SparseVec>& boundaries() const { return boundaries_; }
  /// Cycles completing boundaries() to a basis of all cycles.
  const std::vector<SparseVec>& classes() const { return classes_; }
  std::size_t dim() const { return classes_.size(); }

  /// h with dh + hd = f (free coordinates zero), or nullopt when f is not null-homotopic.
  std::optional<SparseVec> null_homotopy(const SparseVec& f) const;
  /// Coordinates of [f] in classes(); throws std::invalid_argument when f is not a cycle.
  SparseVec class_coordinates(const SparseVec& f) const;

 private:
  SemifreeModule source_;
  TargetSpace target_;
  std::vector<std::size_t> map_offsets_;
  std::vector<std::size_t> homotopy_offsets_;
  SparseMatrix constraints_;
  SparseMatrix boundary_;
  std::vector<SparseVec> cycles_;
  std::vector<SparseVec> boundaries_;
  std::vector<SparseVec> classes_;
  SpanCoordinates class_span_;
};

HomSpace chain_map_space(const SemifreeModule& m, const SemifreeModule& n, int shift);
std::size_t hom_K_dim(const SemifreeModule& m, const SemifreeModule& n, int shift);

/// Map vectors for targets with Y = B, converted to and from module vectors.
SparseVec encode_images(const HomSpace& space, const std::vector<ModuleVector>& images);
std::vector<ModuleVector> decode_images(const HomSpace& space, const SparseVec& f);
std::vector<ModuleVector> decode_homotopy(const HomSpace& space, const SparseVec& h);

struct HomotopyWitness {
  std::vector<ModuleVector> h;  // h(e_l), of degree |e_l| + 1 in the target
};

/// Witness rechecked with module arithmetic before return.
std::optional<HomotopyWitness> is_null_homotopic(const ChainMap& f);
ChainMap map_from_vector(const HomSpace& space, const SparseVec& f);

enum class Perfectness { Verified, Asserted, Unverified };

struct AR1Report {
  bool nonnegative = false;                            // (i)
  Perfectness perfect = Perfectness::Unverified;       // (ii)
  std::vector<std::pair<int, std::size_t>> hom_dims;   // (iii): (n, dim Hom(N, Sigma^n B))
  int bound = 0;                                       // n > bound vanish by degree
  std::optional<int> first_failure;
  bool holds() const;
};

struct AR2Report {
  std::vector<std::pair<int, std::size_t>> hom_dims;  // (n, dim Hom(N, Sigma^n N))
  int bound = 0;
  std::optional<int> first_failure;
  bool holds() const { return !first_failure; }
};

AR1Report check_AR1(const SemifreeModule& n);
AR2Report check_AR2(const SemifreeModule& n);
std::string to_string(Perfectness p);

}  // namespace dglift
