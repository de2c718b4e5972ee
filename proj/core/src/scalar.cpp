#include "dglift/scalar.hpp"

#include <sstream>

namespace dglift {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1U) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1U;
  }
  return r;
}

std::uint64_t reduce_mpz(const mpz_class& z, std::uint64_t p) {
  mpz_class r;
  mpz_class pm;
  mpz_import(pm.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pm.get_mpz_t());
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return count == 0 ? 0 : out;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p >= (1ULL << 62) || !is_prime_u64(p)) {
    throw std::invalid_argument("Field::prime: " + std::to_string(p) + " is not a prime below 2^62");
  }
  return Field(Kind::Prime, p);
}

Field Field::parse(const std::string& spec) {
  if (spec == "Q" || spec == "q") return rationals();
  if (spec == "Fp") return prime(kDefaultPrime);
  if (spec.rfind("Fp:", 0) == 0) {
    const std::string digits = spec.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad prime in field spec '" + spec + "'");
    }
    return prime(std::stoull(digits));
  }
  throw std::invalid_argument("unknown field spec '" + spec + "' (expected Q or Fp:<p>)");
}

std::string Field::name() const {
  return is_rational() ? std::string("Q") : "Fp:" + std::to_string(p_);
}

Scalar::Mod Scalar::promote(const mpq_class& q, std::uint64_t p) {
  std::uint64_t num = reduce_mpz(q.get_num(), p);
  std::uint64_t den = reduce_mpz(q.get_den(), p);
  if (den == 0) throw std::domain_error("rational with denominator divisible by p");
  return Mod{mulmod(num, powmod(den, p - 2, p), p), p};
}

Scalar::Scalar(const Field& f, long n) : Scalar(f, mpq_class(n)) {}

Scalar::Scalar(const Field& f, const mpq_class& q) {
  if (f.is_rational()) {
    mpq_class c(q);
    c.canonicalize();
    v_ = std::move(c);
  } else {
    v_ = promote(q, f.modulus());
  }
}

bool Scalar::is_zero() const {
  if (is_rational()) return sgn(rational()) == 0;
  return residue() == 0;
}

bool Scalar::is_one() const {
  if (is_rational()) return rational() == 1;
  return residue() == 1;
}

Field Scalar::field() const {
  if (is_rational()) return Field::rationals();
  return Field::prime(std::get<Mod>(v_).p);
}

Scalar Scalar::operator+(const Scalar& o) const {
  if (is_rational() && o.is_rational()) return Scalar(std::variant<mpq_class, Mod>(mpq_class(rational() + o.rational())));
  const std::uint64_t p = is_rational() ? std::get<Mod>(o.v_).p : std::get<Mod>(v_).p;
  const Mod a = is_rational() ? promote(rational(), p) : std::get<Mod>(v_);
  const Mod b = o.is_rational() ? promote(o.rational(), p) : std::get<Mod>(o.v_);
  if (a.p != b.p) throw std::logic_error("Scalar: mixing different prime fields");
  std::uint64_t s = a.v + b.v;
  if (s >= p) s -= p;
  return Scalar(std::variant<mpq_class, Mod>(Mod{s, p}));
}

Scalar Scalar::operator-() const {
  if (is_rational()) return Scalar(std::variant<mpq_class, Mod>(mpq_class(-rational())));
  const Mod a = std::get<Mod>(v_);
  return Scalar(std::variant<mpq_class, Mod>(Mod{a.v == 0 ? 0 : a.p - a.v, a.p}));
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_rational() && o.is_rational()) return Scalar(std::variant<mpq_class, Mod>(mpq_class(rational() * o.rational())));
  const std::uint64_t p = is_rational() ? std::get<Mod>(o.v_).p : std::get<Mod>(v_).p;
  const Mod a = is_rational() ? promote(rational(), p) : std::get<Mod>(v_);
  const Mod b = o.is_rational() ? promote(o.rational(), p) : std::get<Mod>(o.v_);
  if (a.p != b.p) throw std::logic_error("Scalar: mixing different prime fields");
  return Scalar(std::variant<mpq_class, Mod>(Mod{mulmod(a.v, b.v, p), p}));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("Scalar: division by zero");
  if (is_rational()) return Scalar(std::variant<mpq_class, Mod>(mpq_class(1 / rational())));
  const Mod a = std::get<Mod>(v_);
  return Scalar(std::variant<mpq_class, Mod>(Mod{powmod(a.v, a.p - 2, a.p), a.p}));
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
  if (is_rational() && o.is_rational()) return rational() == o.rational();
  return (*this - o).is_zero();
}

std::size_t Scalar::weight() const {
  if (!is_rational()) return 1;
  const mpq_class& q = rational();
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

std::string Scalar::to_string() const {
  if (is_rational()) return rational().get_str();
  return std::to_string(residue());
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace dglift
