#include <gtest/gtest.h>

#include <random>

#include "dglift/algebra.hpp"
#include "fixtures.hpp"

using namespace dglift;
using namespace dglift::testing;

namespace {

std::vector<Field> fields() { return {Field::rationals(), Field::prime(Field::kDefaultPrime)}; }

// Counts normal-form monomials of degree d by scanning every bounded exponent vector.
std::size_t brute_force_count(const Algebra& alg, int d) {
  const std::size_t n = alg.num_variables();
  std::vector<int> e(n, 0);
  std::size_t count = 0;
  while (true) {
    int deg = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      deg += e[i] * alg.variable(i).degree;
      if (alg.variable(i).degree % 2 != 0 && e[i] > 1) ok = false;
    }
    if (ok && deg == d) count += static_cast<std::size_t>(alg.base().nilpotency);
    std::size_t k = 0;
    while (k < n && ++e[k] > d) e[k++] = 0;
    if (k == n) break;
  }
  return count;
}

// Graded sign of a permutation of homogeneous factors, computed by bubble sort.
Element ordered_product(const Algebra& alg, const std::vector<std::size_t>& vars) {
  Element x = alg.one();
  for (std::size_t i : vars) x = x * alg.generator(i);
  return x;
}

}  // namespace

TEST(Algebra, BasisExamples) {
  const Field q = Field::rationals();
  Algebra base_only(Presentation{BaseRing::of_field(q), {}, 0});
  EXPECT_EQ(base_only.basis_in_degree(0).size(), 1U);
  Algebra ext = exterior_one(q);
  EXPECT_EQ(ext.basis_in_degree(0).size(), 1U);
  EXPECT_EQ(ext.basis_in_degree(1).size(), 1U);
  EXPECT_EQ(ext.basis_in_degree(2).size(), 0U);
  EXPECT_EQ(ext.basis_in_degree(-1).size(), 0U);
  Algebra r = dual_numbers(q);
  ASSERT_EQ(r.basis_in_degree(0).size(), 2U);
  EXPECT_EQ(r.format(r.basis_in_degree(0)[1]), "a");
  Algebra xy = free_xy(q);
  ASSERT_EQ(xy.basis_in_degree(3).size(), 1U);
  EXPECT_EQ(xy.format(xy.basis_in_degree(3)[0]), "X*Y");
}

TEST(Algebra, BasisMatchesBruteForce) {
  for (const Field& f : fields())
    for (const Algebra& alg : sample_algebras(f))
      for (int d = 0; d <= 10; ++d) EXPECT_EQ(alg.basis_in_degree(d).size(), brute_force_count(alg, d)) << d;
}

TEST(Algebra, MultiplicationExamples) {
  const Field q = Field::rationals();
  Algebra ext = exterior_one(q);
  Element y = ext.generator(0);
  EXPECT_TRUE((y * y).is_zero());
  EXPECT_EQ((ext.one() + y) * (ext.one() - y), ext.one());
  Algebra xy = free_xy(q);
  Element x = xy.generator(0);
  Element yy = xy.generator(1);
  EXPECT_EQ(x * yy, yy * x);
  Algebra m = mixed(q);
  // u and w are odd: uw = -wu.
  EXPECT_EQ(m.generator(0) * m.generator(2), -(m.generator(2) * m.generator(0)));
  EXPECT_EQ(ordered_product(m, {2, 1, 0}), -ordered_product(m, {0, 1, 2}));
}

TEST(Algebra, DifferentialExamples) {
  const Field q = Field::rationals();
  Algebra b = tate_q(q, true);
  Element qq = b.base_generator();
  Element x = b.generator(0);
  Element y = b.generator(1);
  EXPECT_TRUE(b.one().d().is_zero());
  EXPECT_TRUE((qq * x).d().is_zero());  // q * dX = q^2 = 0
  EXPECT_EQ((x * y).d(), qq * y);
  EXPECT_EQ(x.d(), qq);
  EXPECT_EQ(y.d(), qq * x);
  Algebra m = mixed(q);
  Element v = m.generator(1);
  EXPECT_EQ((v * v * v).d(), m.zero());
  Element w = m.generator(2);
  EXPECT_EQ((v * w).d(), v * v * v);
  EXPECT_EQ((w * v).d(), v * v * v);
  EXPECT_EQ((m.generator(0) * w).d(), -(m.generator(0) * v * v));
}

TEST(Algebra, RejectsIllFormedPresentations) {
  const Field q = Field::rationals();
  auto expect_bad = [&](Presentation p) {
    try {
      Algebra a(std::move(p));
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::IllFormedPresentation);
    }
  };
  Presentation wrong_degree{BaseRing::of_field(q), {{"y", 1, {}}, {"z", 3, {}}}, 0};
  wrong_degree.variables[1].differential.emplace(Monomial{0, {1, 0}}, Scalar::one(q));
  expect_bad(wrong_degree);
  Presentation later_var{BaseRing::of_field(q), {{"y", 1, {}}, {"z", 2, {}}}, 0};
  later_var.variables[0].differential.emplace(Monomial{0, {0, 0}}, Scalar::one(q));
  later_var.variables[0].differential.clear();
  later_var.variables[0].differential.emplace(Monomial{0, {0, 1}}, Scalar::one(q));
  expect_bad(later_var);
  // d(z) = v^2 ... with |v| = 2 and dw = v, d^2 w = 0 but pick dd != 0: u (deg 1), v (deg 2, dv = u? bad degree).
  Presentation d2{BaseRing::of_field(q), {{"u", 2, {}}, {"v", 3, {}}, {"w", 4, {}}}, 0};
  d2.variables[1].differential.emplace(Monomial{0, {1, 0, 0}}, Scalar::one(q));
  d2.variables[2].differential.emplace(Monomial{0, {0, 1, 0}}, Scalar::one(q));
  expect_bad(d2);  // d^2 w = d v = u
  expect_bad(Presentation{BaseRing::of_field(q), {{"y", 0, {}}}, 0});
  expect_bad(Presentation{BaseRing::of_field(q), {{"y", 1, {}}, {"y", 1, {}}}, 0});
  expect_bad(Presentation{BaseRing::of_field(q), {{"y", 1, {}}}, 2});
}

TEST(AlgebraProperties, DSquaredAssociativityCommutativityLeibniz) {
  std::mt19937_64 rng(424242);
  for (const Field& f : fields()) {
    for (const Algebra& alg : sample_algebras(f)) {
      for (std::size_t i = 0; i < alg.num_variables(); ++i) EXPECT_TRUE(alg.generator(i).d().d().is_zero());
      for (int t = 0; t < 200; ++t) {
        const int da = static_cast<int>(rng() % 5);
        const int db = static_cast<int>(rng() % 5);
        const int dc = static_cast<int>(rng() % 4);
        Element a = random_homogeneous(alg, da, rng);
        Element b = random_homogeneous(alg, db, rng);
        Element c = random_homogeneous(alg, dc, rng);
        EXPECT_TRUE(a.d().d().is_zero());
        EXPECT_EQ((a * b) * c, a * (b * c));
        const Scalar sign(f, (da * db) % 2 == 0 ? 1L : -1L);
        EXPECT_EQ(a * b, (b * a) * sign);
        const Scalar lsign(f, da % 2 == 0 ? 1L : -1L);
        EXPECT_EQ((a * b).d(), a.d() * b + (a * b.d()) * lsign);
      }
    }
  }
}

TEST(Algebra, SplitAndSubalgebra) {
  const Field q = Field::rationals();
  Algebra alg = tate_q(q, true, 1);
  for (int d = 0; d <= 6; ++d) {
    std::size_t total = 0;
    for (int j = 0; j <= d; ++j) total += alg.subalgebra_basis(j).size() * alg.extra_basis(d - j).size();
    EXPECT_EQ(total, alg.basis_in_degree(d).size());
    for (const auto& m : alg.basis_in_degree(d)) {
      auto [a, x] = alg.split(m);
      EXPECT_TRUE(alg.in_subalgebra(a));
      EXPECT_TRUE(alg.is_extra(x));
      auto p = alg.multiply(a, x);
      ASSERT_TRUE(p);
      EXPECT_EQ(p->first, 1);
      EXPECT_EQ(p->second, m);
    }
  }
}

TEST(Algebra, OwnerMismatch) {
  const Field q = Field::rationals();
  Algebra a = exterior_one(q);
  Algebra b = exterior_one(q);
  EXPECT_THROW(a.one() * b.one(), Error);
}

TEST(Algebra, Formatting) {
  const Field q = Field::rationals();
  Algebra b = tate_q(q, true);
  Element e = b.base_generator() * b.generator(1) * Scalar(q, mpq_class(-1, 2)) + b.one();
  EXPECT_EQ(e.to_string(), "1 - 1/2*q*Y");
}
