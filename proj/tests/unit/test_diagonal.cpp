#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "dense_oracle.hpp"
#include "dglift/diagonal.hpp"
#include "fixtures.hpp"

using namespace dglift;
using namespace dglift::testing;

namespace {

std::vector<Field> fields() { return {Field::rationals(), Field::prime(Field::kDefaultPrime)}; }

// dim (B (x)_A B)_d as the quotient of B (x)_k B by u a (x) v - u (x) a v,
// built densely from monomial pairs without any normal form.
std::size_t enveloping_dim_oracle(const Algebra& alg, int d) {
  const Field& f = alg.field();
  std::map<std::pair<Monomial, Monomial>, std::size_t> index;
  for (int i = 0; i <= d; ++i)
    for (const auto& u : alg.basis_in_degree(i))
      for (const auto& v : alg.basis_in_degree(d - i)) index.emplace(std::pair(u, v), index.size());
  std::vector<SparseVec> rels;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; i + j <= d; ++j) {
      for (const auto& u : alg.basis_in_degree(i))
        for (const auto& a : alg.subalgebra_basis(j))
          for (const auto& v : alg.basis_in_degree(d - i - j)) {
            SparseVec r;
            if (auto ua = alg.multiply(u, a)) r.add(index.at({ua->second, v}), Scalar(f, static_cast<long>(ua->first)));
            if (auto av = alg.multiply(a, v)) r.add(index.at({u, av->second}), Scalar(f, static_cast<long>(-av->first)));
            if (!r.empty()) rels.push_back(r);
          }
    }
  }
  SparseMatrix m(index.size(), rels.size());
  for (std::size_t k = 0; k < rels.size(); ++k) m.set_column(k, rels[k]);
  return index.size() - dense_rank(f, m);
}

TensorTerms random_w1(const TensorTower& t, int d, std::mt19937_64& rng) {
  TensorTerms x;
  for (const auto& k : t.ambient_basis(1, d)) tensor::add(x, {{k, Scalar::one(t.algebra().field())}}, random_scalar(t.algebra().field(), rng));
  return x;
}

}  // namespace

TEST(Enveloping, Examples) {
  const Field q = Field::rationals();
  Algebra k_only(Presentation{BaseRing::of_field(q), {}, 0});
  TensorTower tk(k_only, 6, 2);
  EXPECT_EQ(tk.ambient_basis(1, 0).size(), 1U);
  EXPECT_EQ(tk.dim(1, 0), 0U);

  Algebra ext = exterior_one(q);
  TensorTower t(ext, 6, 3);
  EXPECT_EQ(t.ambient_basis(1, 0).size(), 1U);
  EXPECT_EQ(t.ambient_basis(1, 1).size(), 2U);
  EXPECT_EQ(t.ambient_basis(1, 2).size(), 1U);
  EXPECT_EQ(t.ambient_basis(1, 3).size(), 0U);
}

TEST(Enveloping, DimensionsMatchQuotientOracle) {
  for (const Field& f : fields()) {
    for (const Algebra& alg : sample_algebras(f)) {
      TensorTower t(alg, 7, 2);
      for (int d = 0; d <= 5; ++d) EXPECT_EQ(t.ambient_basis(1, d).size(), enveloping_dim_oracle(alg, d)) << d;
    }
  }
  Algebra tq = tate_q(Field::rationals(), false);
  EXPECT_EQ(TensorTower(tq, 4, 1).ambient_basis(1, 1).size(), 4U);
}

TEST(Diagonal, IdealExamples) {
  const Field q = Field::rationals();
  Algebra ext = exterior_one(q);
  TensorTower t(ext, 6, 3);
  const Monomial one = ext.unit();
  const Monomial y = mono(ext, 0, {1});
  EXPECT_EQ(t.dim(1, 0), 0U);
  EXPECT_EQ(t.dim(1, 1), 1U);
  EXPECT_EQ(t.dim(1, 2), 1U);
  TensorTerms dy = tensor::universal_derivation(ext.generator(0));
  TensorTerms expect{{{y, one}, Scalar::one(q)}, {{one, y}, -Scalar::one(q)}};
  EXPECT_EQ(dy, expect);
  EXPECT_TRUE(t.coordinates(1, 1, dy).has_value());
  EXPECT_TRUE(t.coordinates(1, 2, tensor::pure(ext, {y, y})).has_value());
  EXPECT_TRUE(tensor::universal_derivation(ext.one()).empty());
  // T^1_2 = J_1.
  EXPECT_EQ(t.dim(1, 2 - 1), 1U);
}

TEST(Diagonal, JVanishesInNonPositiveDegrees) {
  for (const Field& f : fields())
    for (const Algebra& alg : sample_algebras(f)) {
      TensorTower t(alg, 6, 3);
      EXPECT_EQ(t.dim(1, 0), 0U);
      EXPECT_EQ(t.dim(2, 1), 0U);
    }
}

TEST(Diagonal, SecondPowerOfExteriorAlgebra) {
  const Field q = Field::rationals();
  Algebra ext = exterior_one(q);
  TensorTower t(ext, 6, 3);
  TensorTerms dy = tensor::universal_derivation(ext.generator(0));
  TensorTerms sq = tensor::concatenate(ext, dy, dy);
  EXPECT_FALSE(sq.empty());
  auto c = t.coordinates(2, 2, sq);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(t.dim(2, 2), 1U);
  SequenceCheck s = t.check_sequence(1, 2);
  EXPECT_EQ(s.quotient_dim, 1U);
  EXPECT_TRUE(s.exact());
}

TEST(DiagonalProperties, DerivationAndProjection) {
  std::mt19937_64 rng(1234);
  for (const Field& f : fields()) {
    for (const Algebra& alg : sample_algebras(f)) {
      TensorTower t(alg, 8, 2);
      for (int trial = 0; trial < 40; ++trial) {
        const int da = static_cast<int>(rng() % 4);
        const int db = static_cast<int>(rng() % 4);
        Element b = random_homogeneous(alg, da, rng);
        Element b2 = random_homogeneous(alg, db, rng);
        const TensorTerms one = tensor::pure(alg, {alg.unit()});
        auto left = [&](const Element& e) {
          TensorTerms out;
          for (const auto& [m, c] : e.terms()) tensor::add(out, tensor::pure(alg, {m, alg.unit()}), c);
          return out;
        };
        auto right = [&](const Element& e) {
          TensorTerms out;
          for (const auto& [m, c] : e.terms()) tensor::add(out, tensor::pure(alg, {alg.unit(), m}), c);
          return out;
        };
        (void)one;
        TensorTerms lhs = tensor::universal_derivation(b * b2);
        TensorTerms rhs = tensor::envelope_multiply(alg, tensor::universal_derivation(b), right(b2));
        tensor::add(rhs, tensor::envelope_multiply(alg, left(b), tensor::universal_derivation(b2)), Scalar::one(f));
        EXPECT_EQ(lhs, rhs);
        EXPECT_TRUE(tensor::envelope_projection(alg, lhs).is_zero());
        EXPECT_TRUE(t.coordinates(1, da + db, lhs).has_value());

        // A-linearity: delta(a b) = a delta(b) for a in A.
        Element a = alg.zero();
        for (const auto& m : alg.subalgebra_basis(static_cast<int>(rng() % 3))) a += alg.monomial(m, random_scalar(f, rng));
        TensorTerms la;
        for (const auto& [m, c] : a.terms())
          tensor::add(la, tensor::left_multiply(alg, m, tensor::universal_derivation(b)), c);
        EXPECT_EQ(tensor::universal_derivation(a * b), la);

        // pi_B is a DG algebra map.
        const int dx = static_cast<int>(rng() % 3);
        const int dz = static_cast<int>(rng() % 3);
        TensorTerms x = random_w1(t, dx, rng);
        TensorTerms z = random_w1(t, dz, rng);
        EXPECT_EQ(tensor::envelope_projection(alg, tensor::envelope_multiply(alg, x, z)),
                  tensor::envelope_projection(alg, x) * tensor::envelope_projection(alg, z));
        EXPECT_EQ(tensor::envelope_projection(alg, tensor::differential(alg, x)),
                  tensor::envelope_projection(alg, x).d());
      }
    }
  }
}

TEST(DiagonalProperties, TowerIsDGBimoduleAndSequenceExact) {
  for (const Field& f : fields()) {
    for (const Algebra& alg : sample_algebras(f)) {
      TensorTower t(alg, 6, 3);
      for (int n = 0; n <= 3; ++n) {
        for (int d = 0; d <= 5; ++d) {
          SparseMatrix dd = t.differential(n, d - 1).compose(t.differential(n, d));
          EXPECT_EQ(dd.nnz(), 0U);
          for (std::size_t i = 0; i < alg.num_variables(); ++i) {
            const Monomial x = alg.generator(i).terms().begin()->first;
            if (d + alg.degree(x) > 6) continue;
            EXPECT_NO_THROW(t.left_action(n, x, d));
            EXPECT_NO_THROW(t.right_action(n, x, d));
          }
          if (n < 3) EXPECT_TRUE(t.check_sequence(n, d).exact()) << "n=" << n << " d=" << d;
        }
      }
      for (int d = 0; d <= 6; ++d) EXPECT_EQ(t.concatenation_rank(1, 1, d), t.dim(2, d));
    }
  }
}

TEST(Diagonal, ZeroPowerCarrierIsAlgebra) {
  const Field q = Field::rationals();
  Algebra alg = tate_q(q, true, 0);
  auto tower = std::make_shared<TensorTower>(alg, 6, 2);
  TensorPowerCarrier c0(tower, 0);
  AlgebraCarrier b(alg, 6);
  for (int d = 0; d <= 5; ++d) {
    EXPECT_EQ(c0.dim(d), b.dim(d));
    EXPECT_EQ(c0.differential(d), b.differential(d));
    const Monomial x = mono(alg, 0, {1, 0});
    EXPECT_EQ(c0.left_action(x, d), b.left_action(x, d));
    EXPECT_EQ(c0.right_action(x, d), b.right_action(x, d));
  }
}

TEST(Diagonal, CapsAreEnforced) {
  TensorTower t(exterior_one(Field::rationals()), 4, 2);
  EXPECT_THROW(t.dim(3, 1), Error);
  EXPECT_THROW(t.dim(1, 5), Error);
}
