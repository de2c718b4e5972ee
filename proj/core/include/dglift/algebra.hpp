#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglift/errors.hpp"
#include "dglift/scalar.hpp"

namespace dglift {

/// Either the field k (nilpotency 1) or k[a]/(a^m), concentrated in degree 0.
struct BaseRing {
  Field field = Field::rationals();
  std::string generator;  // empty for a field
  int nilpotency = 1;

  static BaseRing of_field(const Field& f) { return BaseRing{f, "", 1}; }
  static BaseRing truncated(const Field& f, std::string gen, int m) { return BaseRing{f, std::move(gen), m}; }
  bool is_field() const { return nilpotency == 1; }
};

/// base^base_power * x_1^e_1 * ... * x_n^e_n in declaration order.
struct Monomial {
  int base_power = 0;
  std::vector<int> exponents;

  bool is_one() const;
  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

using Terms = std::map<Monomial, Scalar>;

struct VariableSpec {
  std::string name;
  int degree = 1;
  Terms differential;  // over the base and strictly earlier variables
};

struct Presentation {
  BaseRing base;
  std::vector<VariableSpec> variables;
  std::size_t a_prefix = 0;  // number of leading variables that generate A
};

class Element;

/// Graded-commutative DG algebra B = base<x_1, ..., x_n> with the prefix
/// subalgebra A. Cheap to copy; all copies share one immutable core.
class Algebra {
 public:
  /// Validates and builds; throws Error(IllFormedPresentation).
  explicit Algebra(Presentation pres);

  /// Same variables and degrees, zero differential. Useful for parsing
  /// differentials before the real algebra exists.
  static Algebra graded_skeleton(const BaseRing& base, const std::vector<std::pair<std::string, int>>& vars);

  const Presentation& presentation() const;
  const Field& field() const;
  const BaseRing& base() const;
  std::size_t num_variables() const;
  const VariableSpec& variable(std::size_t i) const;
  std::optional<std::size_t> variable_index(const std::string& name) const;
  std::size_t a_prefix() const;

  int degree(const Monomial& m) const;
  Monomial unit() const;
  /// Product in normal form with its sign, or nullopt when it vanishes.
  std::optional<std::pair<int, Monomial>> multiply(const Monomial& a, const Monomial& b) const;
  /// Leibniz differential of a monomial (memoized).
  const Terms& differential(const Monomial& m) const;

  /// True when m involves only the base and the A-prefix variables.
  bool in_subalgebra(const Monomial& m) const;
  /// True when m involves none of the base generator and A-prefix variables.
  bool is_extra(const Monomial& m) const;
  /// m = a_part * extra_part with no sign, a_part in A and extra_part extra.
  std::pair<Monomial, Monomial> split(const Monomial& m) const;

  /// Top degree of the extra monomials when B is finite over A (all extra
  /// variables odd), nullopt otherwise.
  std::optional<int> max_extra_degree() const;

  /// Ordered k-basis of B_d (empty for d < 0).
  const std::vector<Monomial>& basis_in_degree(int d) const;
  /// Position of m in basis_in_degree(degree(m)).
  std::size_t index_in_degree(const Monomial& m) const;
  /// Basis monomials of degree d lying in A.
  std::vector<Monomial> subalgebra_basis(int d) const;
  /// Basis monomials of degree d that are extra (free A-basis of B).
  std::vector<Monomial> extra_basis(int d) const;

  Element zero() const;
  Element one() const;
  Element constant(const Scalar& c) const;
  Element monomial(const Monomial& m, const Scalar& c) const;
  Element generator(std::size_t i) const;
  Element base_generator() const;

  std::string format(const Monomial& m) const;

  bool operator==(const Algebra& o) const { return impl_ == o.impl_; }

 private:
  struct Impl;
  explicit Algebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  friend class Element;
};

/// Element of an Algebra: finite sum of normal-form monomials.
class Element {
 public:
  Element(const Algebra& owner, Terms terms = {});

  const Algebra& owner() const { return owner_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Common degree of all terms; nullopt for zero or inhomogeneous elements.
  std::optional<int> degree() const;
  Scalar coefficient(const Monomial& m) const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  Element operator*(const Element& o) const;
  Element operator*(const Scalar& c) const;
  Element& operator+=(const Element& o);
  Element d() const;

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  void check_owner(const Element& o) const;
  Algebra owner_;
  Terms terms_;
};

/// Adds c * m into terms, dropping zero coefficients.
void add_term(Terms& terms, const Monomial& m, const Scalar& c);

}  // namespace dglift
