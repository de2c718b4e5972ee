#include "dglift/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

namespace dglift {

bool Monomial::is_one() const {
  if (base_power != 0) return false;
  for (int e : exponents)
    if (e != 0) return false;
  return true;
}

void add_term(Terms& terms, const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

struct Algebra::Impl {
  Presentation pres;
  std::map<std::string, std::size_t> names;

  mutable std::mutex mu;
  mutable std::map<int, std::vector<Monomial>> basis_cache;
  mutable std::map<Monomial, std::size_t> index_cache;
  mutable std::map<Monomial, Terms> diff_cache;
};

namespace {

[[noreturn]] void ill_formed(const std::string& msg) { throw Error(ErrorKind::IllFormedPresentation, msg); }

}  // namespace

Algebra::Algebra(Presentation pres) {
  auto impl = std::make_shared<Impl>();
  const BaseRing& base = pres.base;
  if (base.nilpotency < 1) ill_formed("base nilpotency order must be at least 1");
  if (!base.is_field() && base.generator.empty()) ill_formed("truncated base ring needs a generator name");
  const std::size_t n = pres.variables.size();
  if (pres.a_prefix > n) ill_formed("subalgebra prefix longer than the variable list");
  for (std::size_t i = 0; i < n; ++i) {
    const VariableSpec& v = pres.variables[i];
    if (v.name.empty()) ill_formed("variable " + std::to_string(i) + " has no name");
    if (v.name == base.generator || !impl->names.emplace(v.name, i).second)
      ill_formed("duplicate name '" + v.name + "'");
    if (v.degree < 1) ill_formed("variable '" + v.name + "' must have degree >= 1");
  }
  impl->pres = std::move(pres);
  Algebra alg{std::shared_ptr<const Impl>(impl)};
  const Presentation& p = impl->pres;
  const BaseRing& ring = p.base;
  for (std::size_t i = 0; i < n; ++i) {
    const VariableSpec& v = p.variables[i];
    for (const auto& [m, c] : v.differential) {
      if (m.exponents.size() != n) ill_formed("d(" + v.name + ") has a monomial of the wrong length");
      if (m.base_power < 0 || m.base_power >= ring.nilpotency)
        ill_formed("d(" + v.name + ") has a base power outside the quotient basis");
      for (std::size_t j = 0; j < n; ++j) {
        if (m.exponents[j] < 0) ill_formed("d(" + v.name + ") has a negative exponent");
        if (m.exponents[j] > 0 && j >= i)
          ill_formed("d(" + v.name + ") involves '" + p.variables[j].name + "', which is not an earlier variable");
        if (m.exponents[j] > 1 && p.variables[j].degree % 2 != 0)
          ill_formed("d(" + v.name + ") has an odd variable squared");
      }
      if (alg.degree(m) != v.degree - 1) ill_formed("d(" + v.name + ") is not of degree " + std::to_string(v.degree - 1));
      if (c.is_zero() || !(c.field() == ring.field)) ill_formed("d(" + v.name + ") has a bad coefficient");
    }
    if (!alg.generator(i).d().d().is_zero()) ill_formed("d^2(" + v.name + ") is nonzero");
  }
  impl_ = alg.impl_;
}

Algebra Algebra::graded_skeleton(const BaseRing& base, const std::vector<std::pair<std::string, int>>& vars) {
  Presentation p;
  p.base = base;
  for (const auto& [name, deg] : vars) p.variables.push_back(VariableSpec{name, deg, {}});
  return Algebra(std::move(p));
}

const Presentation& Algebra::presentation() const { return impl_->pres; }
const Field& Algebra::field() const { return impl_->pres.base.field; }
const BaseRing& Algebra::base() const { return impl_->pres.base; }
std::size_t Algebra::num_variables() const { return impl_->pres.variables.size(); }
const VariableSpec& Algebra::variable(std::size_t i) const { return impl_->pres.variables.at(i); }
std::size_t Algebra::a_prefix() const { return impl_->pres.a_prefix; }

std::optional<std::size_t> Algebra::variable_index(const std::string& name) const {
  auto it = impl_->names.find(name);
  if (it == impl_->names.end()) return std::nullopt;
  return it->second;
}

int Algebra::degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < m.exponents.size(); ++i) d += m.exponents[i] * impl_->pres.variables[i].degree;
  return d;
}

Monomial Algebra::unit() const { return Monomial{0, std::vector<int>(num_variables(), 0)}; }

std::optional<std::pair<int, Monomial>> Algebra::multiply(const Monomial& a, const Monomial& b) const {
  const auto& vars = impl_->pres.variables;
  Monomial out{a.base_power + b.base_power, std::vector<int>(vars.size(), 0)};
  if (out.base_power >= impl_->pres.base.nilpotency) return std::nullopt;
  int odd_after = 0;  // odd factors of a with index greater than the current one
  int swaps = 0;
  for (std::size_t k = vars.size(); k-- > 0;) {
    const bool odd = vars[k].degree % 2 != 0;
    out.exponents[k] = a.exponents[k] + b.exponents[k];
    if (odd) {
      if (out.exponents[k] > 1) return std::nullopt;
      if (b.exponents[k] == 1) swaps += odd_after;
      if (a.exponents[k] == 1) ++odd_after;
    }
  }
  return std::pair(swaps % 2 == 0 ? 1 : -1, std::move(out));
}

const Terms& Algebra::differential(const Monomial& m) const {
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->diff_cache.find(m);
    if (it != impl_->diff_cache.end()) return it->second;
  }
  const auto& vars = impl_->pres.variables;
  const Field& f = field();
  Terms out;
  int prefix_degree = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const int e = m.exponents[i];
    if (e == 0) continue;
    Monomial before{m.base_power, std::vector<int>(vars.size(), 0)};
    Monomial after = unit();
    for (std::size_t j = 0; j < vars.size(); ++j) (j < i ? before : after).exponents[j] = (j == i ? 0 : m.exponents[j]);
    before.exponents[i] = e - 1;
    // u * x^(e-1) * dx * v with sign (-1)^{|u|}; e counts the even-variable power rule.
    const Scalar coeff = Scalar(f, static_cast<long>((prefix_degree % 2 == 0 ? 1 : -1) * e));
    for (const auto& [dm, dc] : vars[i].differential) {
      auto left = multiply(before, dm);
      if (!left) continue;
      auto full = multiply(left->second, after);
      if (!full) continue;
      add_term(out, full->second, coeff * dc * Scalar(f, static_cast<long>(left->first * full->first)));
    }
    prefix_degree += e * vars[i].degree;
  }
  std::lock_guard lock(impl_->mu);
  return impl_->diff_cache.try_emplace(m, std::move(out)).first->second;
}

bool Algebra::in_subalgebra(const Monomial& m) const {
  for (std::size_t i = a_prefix(); i < m.exponents.size(); ++i)
    if (m.exponents[i] != 0) return false;
  return true;
}

bool Algebra::is_extra(const Monomial& m) const {
  if (m.base_power != 0) return false;
  for (std::size_t i = 0; i < a_prefix(); ++i)
    if (m.exponents[i] != 0) return false;
  return true;
}

std::pair<Monomial, Monomial> Algebra::split(const Monomial& m) const {
  Monomial a = m;
  Monomial x = m;
  x.base_power = 0;
  for (std::size_t i = 0; i < m.exponents.size(); ++i) (i < a_prefix() ? x : a).exponents[i] = 0;
  return {std::move(a), std::move(x)};
}

std::optional<int> Algebra::max_extra_degree() const {
  int total = 0;
  for (std::size_t i = a_prefix(); i < num_variables(); ++i) {
    if (variable(i).degree % 2 == 0) return std::nullopt;
    total += variable(i).degree;
  }
  return total;
}

const std::vector<Monomial>& Algebra::basis_in_degree(int d) const {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->basis_cache.find(d);
  if (it != impl_->basis_cache.end()) return it->second;
  std::vector<Monomial> out;
  if (d >= 0) {
    const auto& vars = impl_->pres.variables;
    std::vector<int> exps(vars.size(), 0);
    std::vector<std::vector<int>> found;
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
      if (i == vars.size()) {
        if (remaining == 0) found.push_back(exps);
        return;
      }
      const int deg = vars[i].degree;
      const int max = vars[i].degree % 2 != 0 ? std::min(1, remaining / deg) : remaining / deg;
      for (int e = 0; e <= max; ++e) {
        exps[i] = e;
        self(self, i + 1, remaining - e * deg);
      }
      exps[i] = 0;
    };
    rec(rec, 0, d);
    for (int k = 0; k < impl_->pres.base.nilpotency; ++k)
      for (const auto& e : found) out.push_back(Monomial{k, e});
    std::sort(out.begin(), out.end());
  }
  for (std::size_t i = 0; i < out.size(); ++i) impl_->index_cache.emplace(out[i], i);
  return impl_->basis_cache.emplace(d, std::move(out)).first->second;
}

std::size_t Algebra::index_in_degree(const Monomial& m) const {
  basis_in_degree(degree(m));
  std::lock_guard lock(impl_->mu);
  auto it = impl_->index_cache.find(m);
  if (it == impl_->index_cache.end()) throw std::invalid_argument("index_in_degree: not a normal-form monomial");
  return it->second;
}

std::vector<Monomial> Algebra::subalgebra_basis(int d) const {
  std::vector<Monomial> out;
  for (const auto& m : basis_in_degree(d))
    if (in_subalgebra(m)) out.push_back(m);
  return out;
}

std::vector<Monomial> Algebra::extra_basis(int d) const {
  std::vector<Monomial> out;
  for (const auto& m : basis_in_degree(d))
    if (is_extra(m)) out.push_back(m);
  return out;
}

Element Algebra::zero() const { return Element(*this); }
Element Algebra::one() const { return monomial(unit(), Scalar::one(field())); }
Element Algebra::constant(const Scalar& c) const { return monomial(unit(), c); }

Element Algebra::monomial(const Monomial& m, const Scalar& c) const {
  Terms t;
  add_term(t, m, c);
  return Element(*this, std::move(t));
}

Element Algebra::generator(std::size_t i) const {
  Monomial m = unit();
  m.exponents.at(i) = 1;
  return monomial(m, Scalar::one(field()));
}

Element Algebra::base_generator() const {
  if (base().nilpotency < 2) return zero();
  Monomial m = unit();
  m.base_power = 1;
  return monomial(m, Scalar::one(field()));
}

std::string Algebra::format(const Monomial& m) const {
  std::vector<std::string> parts;
  auto power = [](const std::string& name, int e) { return e == 1 ? name : name + "^" + std::to_string(e); };
  if (m.base_power > 0) parts.push_back(power(base().generator, m.base_power));
  for (std::size_t i = 0; i < m.exponents.size(); ++i)
    if (m.exponents[i] > 0) parts.push_back(power(variable(i).name, m.exponents[i]));
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += "*" + parts[i];
  return s;
}

Element::Element(const Algebra& owner, Terms terms) : owner_(owner), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

std::optional<int> Element::degree() const {
  std::optional<int> d;
  for (const auto& [m, c] : terms_) {
    const int dm = owner_.degree(m);
    if (d && *d != dm) return std::nullopt;
    d = dm;
  }
  return d;
}

Scalar Element::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar::zero(owner_.field()) : it->second;
}

void Element::check_owner(const Element& o) const {
  if (!(owner_ == o.owner_)) throw Error(ErrorKind::OwnerMismatch, "elements of different algebras");
}

Element Element::operator+(const Element& o) const {
  Element r = *this;
  r += o;
  return r;
}

Element& Element::operator+=(const Element& o) {
  check_owner(o);
  for (const auto& [m, c] : o.terms_) add_term(terms_, m, c);
  return *this;
}

Element Element::operator-() const { return *this * (-Scalar::one(owner_.field())); }
Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::operator*(const Scalar& c) const {
  Terms t;
  for (const auto& [m, x] : terms_) add_term(t, m, x * c);
  return Element(owner_, std::move(t));
}

Element Element::operator*(const Element& o) const {
  check_owner(o);
  Terms t;
  const Field& f = owner_.field();
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      auto p = owner_.multiply(ma, mb);
      if (p) add_term(t, p->second, ca * cb * Scalar(f, static_cast<long>(p->first)));
    }
  }
  return Element(owner_, std::move(t));
}

Element Element::d() const {
  Terms t;
  for (const auto& [m, c] : terms_)
    for (const auto& [dm, dc] : owner_.differential(m)) add_term(t, dm, c * dc);
  return Element(owner_, std::move(t));
}

bool Element::operator==(const Element& o) const { return owner_ == o.owner_ && (*this - o).is_zero(); }

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string coeff = c.to_string();
    const bool negative = c.is_rational() && sgn(c.rational()) < 0;
    if (negative) coeff = coeff.substr(1);
    if (!first) os << (negative ? " - " : " + ");
    else if (negative) os << "-";
    first = false;
    const bool unit_coeff = coeff == "1";
    if (m.is_one()) {
      os << coeff;
    } else {
      if (!unit_coeff) os << coeff << "*";
      os << owner_.format(m);
    }
  }
  return os.str();
}

}  // namespace dglift
