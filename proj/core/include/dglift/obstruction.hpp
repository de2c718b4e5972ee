#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dglift/diagonal.hpp"
#include "dglift/homotopy.hpp"
#include "dglift/module.hpp"

namespace dglift {

/// N (x)_B T for a semifree N, truncated at the tower's tensor cap. Component i
/// is modelled as Sigma^i (N (x)_B J^{(x)i}); the obstruction map w raises the
/// component by one and has DG degree 0.
class ObstructionComplex {
 public:
  ObstructionComplex(SemifreeModule n, std::shared_ptr<const TensorTower> tower);

  const SemifreeModule& module() const { return n_; }
  const TensorTower& tower() const { return *tower_; }
  std::shared_ptr<const TensorTower> tower_ptr() const { return tower_; }
  int max_tensor() const { return tower_->max_tensor(); }

  /// Sigma^extra of component i.
  TargetSpace component(int i, int extra = 0) const;
  /// e_l (x) 1 in component 0, degree |e_l|.
  SparseVec generator(std::size_t l) const;

  /// w: component i -> component i+1 in DG degree d, from the closed formula
  /// e_l (x) t -> sum_m e_m (x) delta(b_ml) (x) t.
  SparseMatrix w_matrix(int i, int d) const;
  /// The same map assembled as (sigma o d o rho) (x) id through N (x)_B B^e.
  SparseMatrix w_plus_matrix(int i, int d) const;
  /// Checks d w = w d and right B-linearity of w in degree d; empty when fine.
  std::string w_defect(int i, int d) const;

  /// chi^ell(e_l) for every l, in component ell at degree |e_l|, summed over chains.
  std::vector<SparseVec> chi_power(int ell) const;
  /// The same by applying w ell times to e_l (x) 1.
  std::vector<SparseVec> chi_power_iterated(int ell) const;

  /// Hom_K(N, Sigma^m (N (x)_B T^n)).
  HomSpace gamma_space(int n, int m = 0) const;
  /// dim Gamma^n; zero for n < 0.
  std::size_t gamma_dim(int n) const;
  /// Null-homotopy of chi^1, rechecked; nullopt when omega is nonzero.
  std::optional<SparseVec> omega_witness() const;
  /// Composition with Sigma^m w on homotopy classes, Gamma-bases of gamma_space(n, m)
  /// to gamma_space(n+1, m).
  SparseMatrix omega_action_matrix(int n, int m) const;
  /// w o f for a map vector f of gamma_space(n, m), as a map vector of gamma_space(n+1, m).
  SparseVec compose_w(const HomSpace& src, const HomSpace& dst, int n, int m, const SparseVec& f) const;

  /// (computed, predicted) dim of the degree-d part of component n of the cone of w.
  std::pair<std::size_t, std::size_t> cone_component_dims(int n, int d) const;

  /// Least k >= 1 with w^k(x) = 0 for basis vector j of component i in degree d;
  /// nullopt when the tensor cap is reached first.
  std::optional<int> nilpotency_index(int i, int d, std::size_t j) const;

 private:
  std::shared_ptr<const Carrier> carrier(int i) const;

  SemifreeModule n_;
  std::shared_ptr<const TensorTower> tower_;
  std::vector<std::shared_ptr<const Carrier>> carriers_;
};

/// Places per-generator images (as returned by chi_power) into map vector layout.
SparseVec as_map_vector(const HomSpace& space, const std::vector<SparseVec>& images);
/// Block l of a map vector, in coordinates of the target at degree |e_l|.
SparseVec map_block(const HomSpace& space, const SparseVec& f, std::size_t l);

/// f (x) id on component i in degree d, for a degree-0 chain map f: N -> N'.
SparseMatrix tensor_map_matrix(const ObstructionComplex& src, const ObstructionComplex& dst, const ChainMap& f, int i,
                               int d);

/// The presentation of N in the basis e'_l = u(e_l), for u = id + strictly lower
/// triangular part over B. Throws std::invalid_argument when u is not unipotent.
SemifreeModule rebase(const SemifreeModule& n, const std::vector<ModuleVector>& u_images);

}  // namespace dglift
