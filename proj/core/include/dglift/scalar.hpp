#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace dglift {

/// Coefficient field selector: the rationals or a prime field F_p.
class Field {
 public:
  enum class Kind { Rational, Prime };

  static constexpr std::uint64_t kDefaultPrime = 2147483629ULL;

  static Field rationals() { return Field(Kind::Rational, 0); }
  /// Throws std::invalid_argument unless p is a prime below 2^62.
  static Field prime(std::uint64_t p);
  /// Parses "Q" or "Fp:<p>" (also "Fp" for the default prime).
  static Field parse(const std::string& spec);

  Kind kind() const { return kind_; }
  std::uint64_t modulus() const { return p_; }
  bool is_rational() const { return kind_ == Kind::Rational; }
  std::string name() const;

  bool operator==(const Field& o) const { return kind_ == o.kind_ && p_ == o.p_; }

 private:
  Field(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint64_t p_;
};

bool is_prime_u64(std::uint64_t n);

class Scalar {
 public:
  struct Mod {
    std::uint64_t v;
    std::uint64_t p;
  };

  /// Rational zero. Only meaningful as a placeholder; arithmetic with a
  /// modular scalar promotes integral rationals into F_p.
  Scalar() : v_(mpq_class(0)) {}
  Scalar(const Field& f, long n);
  Scalar(const Field& f, const mpq_class& q);

  static Scalar zero(const Field& f) { return Scalar(f, 0L); }
  static Scalar one(const Field& f) { return Scalar(f, 1L); }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const { return std::holds_alternative<mpq_class>(v_); }
  Field field() const;

  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  std::uint64_t residue() const { return std::get<Mod>(v_).v; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  /// Throws std::domain_error on zero.
  Scalar inverse() const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Heuristic size used for pivot selection (bit length of num+den, or 1).
  std::size_t weight() const;

  std::string to_string() const;

 private:
  explicit Scalar(std::variant<mpq_class, Mod> v) : v_(std::move(v)) {}
  static Mod promote(const mpq_class& q, std::uint64_t p);
  std::variant<mpq_class, Mod> v_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace dglift
