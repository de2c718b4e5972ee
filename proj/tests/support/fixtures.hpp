#pragma once

// Small algebras shared by the unit tests, plus random element generators.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dglift/algebra.hpp"
#include "dglift/module.hpp"

namespace dglift::testing {

inline Monomial mono(const Algebra& alg, int base_power, std::vector<int> exps) {
  exps.resize(alg.num_variables(), 0);
  return Monomial{base_power, std::move(exps)};
}

/// Lambda(y), |y| = 1, over k; A = k.
inline Algebra exterior_one(const Field& f) {
  Presentation p;
  p.base = BaseRing::of_field(f);
  p.variables.push_back({"y", 1, {}});
  return Algebra(p);
}

/// k[q]/(q^2) with X (|X| = 1, dX = q) and optionally Y (|Y| = 2, dY = qX).
inline Algebra tate_q(const Field& f, bool with_y, std::size_t a_prefix = 0) {
  Presentation p;
  p.base = BaseRing::truncated(f, "q", 2);
  const std::size_t n = with_y ? 2 : 1;
  Terms dx;
  dx.emplace(Monomial{1, std::vector<int>(n, 0)}, Scalar::one(f));
  p.variables.push_back({"X", 1, dx});
  if (with_y) {
    Terms dy;
    dy.emplace(Monomial{1, {1, 0}}, Scalar::one(f));
    p.variables.push_back({"Y", 2, dy});
  }
  p.a_prefix = a_prefix;
  return Algebra(p);
}

/// k<X, Y>, |X| = 1, |Y| = 2, zero differential; A = k<X> when a_prefix = 1.
inline Algebra free_xy(const Field& f, std::size_t a_prefix = 0) {
  Presentation p;
  p.base = BaseRing::of_field(f);
  p.variables.push_back({"X", 1, {}});
  p.variables.push_back({"Y", 2, {}});
  p.a_prefix = a_prefix;
  return Algebra(p);
}

/// k[a]/(a^2), no variables.
inline Algebra dual_numbers(const Field& f) {
  Presentation p;
  p.base = BaseRing::truncated(f, "a", 2);
  return Algebra(p);
}

/// Mixed parity polynomial algebra with a nontrivial differential, over k.
/// |u| = 1, |v| = 2 with dv = 0, |w| = 5 with dw = v^2.
inline Algebra mixed(const Field& f) {
  Presentation p;
  p.base = BaseRing::of_field(f);
  p.variables.push_back({"u", 1, {}});
  p.variables.push_back({"v", 2, {}});
  Terms dw;
  dw.emplace(Monomial{0, {0, 2, 0}}, Scalar::one(f));
  p.variables.push_back({"w", 5, dw});
  p.a_prefix = 1;
  return Algebra(p);
}

inline Scalar random_scalar(const Field& f, std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range);
  return Scalar(f, static_cast<long>(d(rng)));
}

inline Element random_homogeneous(const Algebra& alg, int degree, std::mt19937_64& rng) {
  Element x = alg.zero();
  for (const auto& m : alg.basis_in_degree(degree)) x += alg.monomial(m, random_scalar(alg.field(), rng));
  return x;
}

inline std::vector<Algebra> sample_algebras(const Field& f) {
  return {exterior_one(f), tate_q(f, false), tate_q(f, true, 1), free_xy(f, 1), dual_numbers(f), mixed(f)};
}

struct DiffEntry {
  std::size_t target;  // column
  std::size_t source;  // row: coefficient of this basis element
  Element coeff;
};

inline SemifreeModule module_from(const Algebra& alg, std::vector<BasisElement> basis,
                                  const std::vector<DiffEntry>& entries, int cap = kDefaultMaxDegree) {
  std::vector<std::map<std::size_t, Element>> diff(basis.size());
  for (const auto& e : entries) diff.at(e.target).emplace(e.source, e.coeff);
  return SemifreeModule(alg, std::move(basis), std::move(diff), cap);
}

/// e0 (deg 0), e1 (deg 2), d e1 = e0 y over Lambda(y).
inline SemifreeModule i2_module(const Algebra& ext) {
  return module_from(ext, {{"e0", 0}, {"e1", 2}}, {{1, 0, ext.generator(0)}});
}

/// Koszul complex of a over k[a]/(a^2).
inline SemifreeModule koszul_module(const Algebra& r) {
  return module_from(r, {{"e0", 0}, {"e1", 1}}, {{1, 0, r.base_generator()}});
}

inline ModuleVector random_module_vector(const SemifreeModule& m, int degree, std::mt19937_64& rng) {
  ModuleVector v = m.zero_vector();
  for (std::size_t l = 0; l < m.rank(); ++l)
    v[l] = random_homogeneous(m.algebra(), degree - m.basis_element(l).degree, rng);
  return v;
}

}  // namespace dglift::testing
