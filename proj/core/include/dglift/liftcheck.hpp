#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglift/homotopy.hpp"
#include "dglift/module.hpp"
#include "dglift/obstruction.hpp"

namespace dglift {

inline constexpr int kDefaultLiftBound = 4;

/// A strict section of the counit of N|_A (x)_A B, with that base change.
struct Splitting {
  BaseChange base;
  ChainMap section;
};

/// Solves for sigma with counit o sigma = id exactly; nullopt certifies that none exists.
std::optional<Splitting> splitting_search(const SemifreeModule& n);

/// N as a retract of B^m up to homotopy: h o g - id = d k + k d.
struct SummandWitness {
  std::size_t m = 0;
  ChainMap g;                       // N -> B^m
  ChainMap h;                       // B^m -> N
  std::vector<ModuleVector> homotopy;  // k(e_l), degree |e_l| + 1
};

/// Pushes the splitting down the degree filtration of the base change using
/// null-homotopies into shifted copies of B. Throws FiltrationStuck when one of
/// them does not exist. The result is rechecked before return.
SummandWitness summand_witness(const SemifreeModule& n, const Splitting& split);

struct Verdict {
  bool value = false;
  std::string note;
};

struct LiftReport {
  AR1Report ar1;
  int lbound = kDefaultLiftBound;
  std::array<Verdict, 9> conditions;  // (i) .. (ix)
  std::size_t end_dim = 0;
  std::vector<std::size_t> gamma_dims;  // n = 0 .. lbound
  std::optional<int> nilpotency_exponent;
  std::optional<Splitting> splitting;
  std::optional<SparseVec> omega_witness;
  std::optional<SummandWitness> summand;
  bool lemma_agrees = false;  // (i) <=> (ii), needs no hypothesis
  bool all_agree = false;
  /// False when an equivalence that must hold here is violated.
  bool consistent() const { return lemma_agrees && (!ar1.holds() || all_agree); }
};

LiftReport naive_lift_battery(const SemifreeModule& n, int lbound = kDefaultLiftBound);

/// dim of the ideal of End_K(N) of maps factoring through finite frees, computed
/// as the image of Hom_K(N, N|_A (x)_A B) and as the kernel of omega on Gamma^0.
struct PIdealReport {
  std::size_t via_factorization = 0;
  std::size_t via_kernel = 0;
  std::size_t end_dim = 0;
  std::size_t gamma0 = 0;
  std::size_t gamma1 = 0;
  /// Holds for every N: the two routes describe the same kernel.
  bool routes_agree() const { return via_factorization == via_kernel; }
  /// Surjectivity onto Gamma^1, expected under AR1.
  bool rank_identity() const { return via_kernel + gamma1 == gamma0 && gamma0 == end_dim; }
  bool consistent() const { return routes_agree() && rank_identity(); }
};

PIdealReport p_ideal_dims(const SemifreeModule& n, int max_tensor = 2);

/// Kernel and cokernel of omega: Gamma^n -> Gamma^{n+1} for n = -1 .. lbound - 1
/// against the four-term sequence.
struct KernelSequenceRow {
  int n = 0;
  std::size_t kernel = 0;
  std::size_t cokernel = 0;
  std::size_t expected_kernel = 0;
  std::size_t expected_cokernel = 0;
  bool ok() const { return kernel == expected_kernel && cokernel == expected_cokernel; }
};

struct KernelSequenceReport {
  std::vector<KernelSequenceRow> rows;
  PIdealReport p;
  bool ok() const;
};

KernelSequenceReport kernel_sequence_check(const SemifreeModule& n, int lbound = kDefaultLiftBound);

/// Ranks of composition with Sigma^m omega from Hom_K(N, Sigma^m(N (x) T^n)) to n + 1.
struct OmegaActionRow {
  int n = 0;
  int m = 0;
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::size_t rank = 0;
  bool surjective() const { return rank == target_dim; }
  bool injective() const { return rank == source_dim; }
};

std::vector<OmegaActionRow> omega_action_table(const ObstructionComplex& c, int lbound, int max_shift);
/// rank of omega^n . End inside Gamma^n, for n = 0 .. lbound.
std::vector<std::size_t> omega_power_ranks(const ObstructionComplex& c, int lbound);

struct KoszulClassCheck {
  bool is_chain_map = false;
  bool null_homotopic = true;
  std::size_t hom_dim = 0;  // dim Hom_K(N, Sigma^{-1} N)
  std::size_t h1 = 0;
  bool reproduced() const { return is_chain_map && !null_homotopic && hom_dim >= 1 && h1 != 0; }
};

/// For N = K(a) over k[a]/(a^2): the class e0 -> e1 a, e1 -> 0 in Hom(N, Sigma^{-1} N).
std::optional<KoszulClassCheck> koszul_class_check(const SemifreeModule& n);

struct AppendixEntry {
  std::string name;
  bool resolution_like = false;    // H_i(N) = 0 for i != 0 within the cap
  bool nonnegative_homology = false;
  bool algebra_acyclic = false;    // H_i(B) = 0 for i >= 1 within the cap
  std::vector<std::pair<int, std::size_t>> self_negative;  // (l, dim Hom(N, Sigma^l N)), l < 0
  std::vector<std::pair<int, std::size_t>> to_base_negative;  // (i, dim Hom(N, Sigma^i B)), i < 0
  std::optional<KoszulClassCheck> koszul;
  bool proposition_holds() const;
  bool corollary_holds() const;
};

AppendixEntry appendix_check(const std::string& name, const SemifreeModule& n, int negative_range = 3);

}  // namespace dglift
