#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglift/algebra.hpp"
#include "dglift/carrier.hpp"
#include "dglift/sparse.hpp"

namespace dglift {

inline constexpr int kDefaultMaxTensor = 4;

/// A pure tensor m_0 (x) m_1 (x) ... (x) m_n in B (x)_A ... (x)_A B. Normal form:
/// m_1, ..., m_n are extra monomials (no base or A-variables).
using TensorKey = std::vector<Monomial>;
using TensorTerms = std::map<TensorKey, Scalar>;

/// Arithmetic on the ambient tensor powers W_n = B^{(x)_A (n+1)}.
namespace tensor {

int degree(const Algebra& alg, const TensorKey& k);
/// Adds c * (raw factors) after moving A-parts leftward.
void add_normalized(const Algebra& alg, TensorTerms& out, TensorKey raw, const Scalar& c);
void add(TensorTerms& out, const TensorTerms& x, const Scalar& c);
TensorTerms scaled(const TensorTerms& x, const Scalar& c);
TensorTerms pure(const Algebra& alg, TensorKey raw);
/// Koszul-Leibniz differential over the factors.
TensorTerms differential(const Algebra& alg, const TensorTerms& x);
/// b * x, acting on the first factor.
TensorTerms left_multiply(const Algebra& alg, const Monomial& b, const TensorTerms& x);
/// x * b, acting on the last factor.
TensorTerms right_multiply(const Algebra& alg, const TensorTerms& x, const Monomial& b);
/// m_0 m_1 (x) m_2 (x) ... : W_{n+1} -> W_n.
TensorTerms multiply_first_two(const Algebra& alg, const TensorTerms& x);
/// (x_0 .. x_p) (x)_B (y_0 .. y_q) = x_0 (x) .. (x) x_p y_0 (x) y_1 (x) .. (x) y_q
TensorTerms concatenate(const Algebra& alg, const TensorTerms& x, const TensorTerms& y);
/// Product in B^e = W_1: (b1 (x) b2)(b1' (x) b2') = (-1)^{|b1'||b2|} b1 b1' (x) b2 b2'.
TensorTerms envelope_multiply(const Algebra& alg, const TensorTerms& x, const TensorTerms& y);
/// pi_B: B^e -> B.
Element envelope_projection(const Algebra& alg, const TensorTerms& x);
/// delta(b) = b (x) 1 - 1 (x) b.
TensorTerms universal_derivation(const Element& b);
TensorTerms from_element(const Element& b);
std::string format(const Algebra& alg, const TensorTerms& x);

}  // namespace tensor

/// Dimension data for the sequence 0 -> J^{(x)(n+1)} -> B (x)_A J^{(x)n} -> J^{(x)n} -> 0
/// in one degree, with J (x)_B J^{(x)n} computed independently as a relation quotient.
struct SequenceCheck {
  int n = 0;
  int degree = 0;
  std::size_t left_dim = 0;         // J^{(x)(n+1)}_d as a kernel
  std::size_t middle_dim = 0;       // (B (x)_A J^{(x)n})_d
  std::size_t right_dim = 0;        // J^{(x)n}_d
  std::size_t surjection_rank = 0;  // rank of the multiplication map
  std::size_t quotient_dim = 0;     // (J (x)_B J^{(x)n})_d as a relation quotient
  std::size_t image_rank = 0;       // rank of the quotient mapped into the middle term
  bool exact() const {
    return surjection_rank == right_dim && left_dim + right_dim == middle_dim && quotient_dim == left_dim &&
           image_rank == left_dim;
  }
};

/// The tower J^{(x)_B n} for 0 <= n <= max_tensor, each realized degreewise
/// inside W_n. J^{(x)0} = B, J^{(x)1} = J = ker(pi_B), and J^{(x)(n+1)} is the
/// kernel of multiplication B (x)_A J^{(x)n} -> J^{(x)n}.
class TensorTower {
 public:
  TensorTower(Algebra alg, int max_degree = 16, int max_tensor = kDefaultMaxTensor);

  const Algebra& algebra() const { return alg_; }
  int max_degree() const { return max_degree_; }
  int max_tensor() const { return max_tensor_; }

  /// Ordered k-basis of (W_n)_d.
  const std::vector<TensorKey>& ambient_basis(int n, int d) const;
  SparseVec ambient_coordinates(int n, int d, const TensorTerms& x) const;

  std::size_t dim(int n, int d) const;
  const std::vector<TensorTerms>& basis(int n, int d) const;
  /// Coordinates in basis(n, d); nullopt when x is not in J^{(x)n}.
  std::optional<SparseVec> coordinates(int n, int d, const TensorTerms& x) const;
  TensorTerms from_coordinates(int n, int d, const SparseVec& v) const;

  SparseMatrix differential(int n, int d) const;
  SparseMatrix left_action(int n, const Monomial& m, int d) const;
  SparseMatrix right_action(int n, const Monomial& m, int d) const;

  /// Builds J (x)_B J^{(x)n} in degree d as a relation quotient and compares.
  SequenceCheck check_sequence(int n, int d) const;
  /// Rank of concatenation J^{(x)p} (x) J^{(x)q} -> J^{(x)(p+q)} in degree d.
  std::size_t concatenation_rank(int p, int q, int d) const;

 private:
  struct Ambient {
    std::vector<TensorKey> keys;
    std::map<TensorKey, std::size_t> index;
  };
  struct Piece {
    std::vector<TensorTerms> basis;
    SpanCoordinates span;
  };
  void check_range(int n, int d) const;
  const Ambient& ambient(int n, int d) const;
  const Piece& piece(int n, int d) const;
  Piece build_piece(int n, int d) const;
  SparseMatrix map_matrix(int n_src, int d_src, int n_dst, int d_dst,
                          const std::function<TensorTerms(const TensorTerms&)>& fn) const;

  Algebra alg_;
  int max_degree_;
  int max_tensor_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// J^{(x)n} as a Carrier (n = 0 gives B).
class TensorPowerCarrier final : public Carrier {
 public:
  TensorPowerCarrier(std::shared_ptr<const TensorTower> tower, int n);

  const Algebra& algebra() const override { return tower_->algebra(); }
  std::size_t dim(int d) const override { return tower_->dim(n_, d); }
  SparseMatrix differential(int d) const override { return tower_->differential(n_, d); }
  SparseMatrix left_action(const Monomial& m, int d) const override { return tower_->left_action(n_, m, d); }
  SparseMatrix right_action(const Monomial& m, int d) const override { return tower_->right_action(n_, m, d); }
  std::string describe() const override { return "J^" + std::to_string(n_); }

  int power() const { return n_; }
  const TensorTower& tower() const { return *tower_; }

 private:
  std::shared_ptr<const TensorTower> tower_;
  int n_;
};

}  // namespace dglift
