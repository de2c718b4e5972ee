// Evaluates the acceptance criteria on the instance corpus under both
// backends and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "fixtures.hpp"

using namespace dglift;
using namespace dglift::acceptance;
using dglift::testing::random_homogeneous;
using dglift::testing::random_module_vector;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

using Corpora = std::vector<Corpus>;

std::shared_ptr<const TensorTower> tower_for(const Entry& e) {
  return std::make_shared<TensorTower>(e.module.algebra(), e.module.max_degree(), e.max_tensor);
}

std::string tag(const Corpus& c, const Entry& e) { return e.label + " [" + c.field.name() + "]"; }

Element sign_for(const Algebra& alg, int degree) {
  return degree % 2 ? alg.constant(Scalar(alg.field(), -1L)) : alg.one();
}

// 1. d^2 = 0, graded commutativity and Leibniz on generators and random elements.
Result algebra_soundness(const Corpora& all) {
  Result r;
  std::size_t checks = 0;
  for (const Corpus& c : all) {
    std::mt19937_64 rng(20240611);
    for (const Entry* e : c.algebras()) {
      const Algebra& alg = e->module.algebra();
      const int top = std::min(e->module.max_degree() / 2, 5);
      std::vector<std::pair<Element, int>> sample;
      for (std::size_t i = 0; i < alg.num_variables(); ++i) sample.emplace_back(alg.generator(i), alg.variable(i).degree);
      if (!alg.base().is_field()) sample.emplace_back(alg.base_generator(), 0);
      std::uniform_int_distribution<int> deg(0, top);
      for (int k = 0; k < 200; ++k) {
        const int d = deg(rng);
        sample.emplace_back(random_homogeneous(alg, d, rng), d);
      }
      for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& [a, da] = sample[i];
        const auto& [b, db] = sample[(i * 7 + 3) % sample.size()];
        r.require(a.d().d().is_zero(), tag(c, *e) + ": d^2 != 0");
        r.require(a * b == sign_for(alg, da * db) * (b * a), tag(c, *e) + ": graded commutativity");
        r.require((a * b).d() == a.d() * b + sign_for(alg, da) * a * b.d(), tag(c, *e) + ": Leibniz");
        checks += 3;
      }
    }
    for (const Entry& e : c.entries)
      for (int k = 0; k < 20; ++k) {
        const int d = e.module.bottom_degree() + k % 5;
        const ModuleVector v = random_module_vector(e.module, d, rng);
        const ModuleVector dd = e.module.apply_differential(e.module.apply_differential(v));
        r.require(std::all_of(dd.begin(), dd.end(), [](const Element& x) { return x.is_zero(); }),
                  tag(c, e) + ": module d^2 != 0");
        ++checks;
      }
  }
  r.detail = std::to_string(checks) + " identities";
  return r;
}

// 2. dim J_d + dim B_d = dim (B^e)_d and the sequence bookkeeping for n <= L-1.
Result diagonal_exactness(const Corpora& all) {
  Result r;
  std::size_t checks = 0;
  for (const Corpus& c : all)
    for (const Entry* e : c.algebras()) {
      const auto tower = tower_for(*e);
      const Algebra& alg = e->module.algebra();
      for (int d = 0; d <= e->module.max_degree(); ++d) {
        r.require(tower->dim(1, d) + alg.basis_in_degree(d).size() == tower->ambient_basis(1, d).size(),
                  tag(c, *e) + ": J + B != B^e in degree " + std::to_string(d));
        ++checks;
        for (int n = 0; n <= e->lbound - 1; ++n) {
          const SequenceCheck s = tower->check_sequence(n, d);
          r.require(s.exact(), tag(c, *e) + ": sequence n=" + std::to_string(n) + " d=" + std::to_string(d));
          ++checks;
        }
      }
    }
  r.detail = std::to_string(checks) + " degree checks";
  return r;
}

// 3. The Koszul counterexample over k[a]/(a^2).
Result appendix_counterexample(const Corpora& all) {
  Result r;
  for (const Corpus& c : all) {
    const Entry* e = c.find("I3.dg:K");
    r.require(e != nullptr, "I3.dg:K missing from the corpus");
    if (!e) continue;
    const std::size_t dim = hom_K_dim(e->module, e->module, -1);
    const auto k = koszul_class_check(e->module);
    r.require(dim >= 1, tag(c, *e) + ": Hom(N, Sigma^-1 N) = 0");
    r.require(k && k->is_chain_map && !k->null_homotopic, tag(c, *e) + ": explicit class not a nonzero class");
    r.require(homology_dim(e->module, 1) != 0, tag(c, *e) + ": H_1 = 0");
    if (c.field.is_rational()) r.detail = "dim Hom(N, Sigma^-1 N) = " + std::to_string(dim);
  }
  return r;
}

// 4. omega = 0 with a witness and a section for B^n, n = 1, 2, 3.
Result frees(const Corpora& all) {
  Result r;
  std::size_t cases = 0;
  for (const Corpus& c : all)
    for (const Entry* e : c.algebras())
      for (int n = 1; n <= 3; ++n) {
        const SemifreeModule f = free_module(e->module.algebra(), std::vector<int>(n, 0), e->module.max_degree());
        ObstructionComplex oc(f, tower_for(*e));
        const std::string what = e->file + " B^" + std::to_string(n) + " [" + c.field.name() + "]";
        r.require(oc.omega_witness().has_value(), what + ": no witness");
        r.require(splitting_search(f).has_value(), what + ": no section");
        ++cases;
      }
  r.detail = std::to_string(cases) + " free modules over " + std::to_string(all.front().algebras().size()) + " algebras";
  return r;
}

// 5. Splitting agrees with omega = 0 without any hypothesis.
Result lemma_equivalence(const Corpora& all) {
  Result r;
  std::size_t liftable = 0;
  for (const Corpus& c : all) {
    r.require(c.entries.size() >= 8, "corpus has fewer than 8 modules");
    for (const char* need : {"I2.dg:I2", "I3.dg:K", "cone.dg:coneB", "B.dg:B"})
      r.require(c.find(need) != nullptr, std::string(need) + " missing from the corpus");
    for (const Entry& e : c.entries) {
      const bool split = splitting_search(e.module).has_value();
      const bool zero = ObstructionComplex(e.module, tower_for(e)).omega_witness().has_value();
      r.require(split == zero, tag(c, e) + ": split=" + std::to_string(split) + " omega0=" + std::to_string(zero));
      liftable += split;
    }
  }
  r.detail = std::to_string(all.front().entries.size()) + " modules, " + std::to_string(liftable / all.size()) +
             " liftable";
  return r;
}

std::vector<const Entry*> ar1_entries(const Corpus& c) {
  std::vector<const Entry*> out;
  for (const auto& e : c.entries)
    if (check_AR1(e.module).holds()) out.push_back(&e);
  return out;
}

// 6. All nine verdicts agree under AR1.
Result nine_conditions(const Corpora& all) {
  Result r;
  for (const Corpus& c : all) {
    const auto ar1 = ar1_entries(c);
    for (const char* need : {"B.dg:B", "B2.dg:B2", "B3.dg:B3", "summand.dg:S", "cone.dg:coneB"}) {
      const Entry* e = c.find(need);
      r.require(e && std::find(ar1.begin(), ar1.end(), e) != ar1.end(), std::string(need) + " is not an AR1 instance");
    }
    for (const Entry* e : ar1) {
      const LiftReport rep = naive_lift_battery(e->module, e->lbound);
      std::string verdicts;
      for (const auto& v : rep.conditions) verdicts += v.value ? 'T' : 'F';
      r.require(rep.all_agree, tag(c, *e) + ": verdicts " + verdicts + " disagree (potential counterexample event)");
    }
    if (c.field.is_rational()) r.detail = std::to_string(ar1.size()) + " AR1 modules";
  }
  return r;
}

// 7. Surjectivity and injectivity of composition with omega.
Result main_matrices(const Corpora& all) {
  Result r;
  std::size_t matrices = 0;
  for (const Corpus& c : all)
    for (const Entry* e : ar1_entries(c)) {
      ObstructionComplex oc(e->module, tower_for(*e));
      for (const auto& row : omega_action_table(oc, e->lbound, 3)) {
        const std::string at = tag(c, *e) + " n=" + std::to_string(row.n) + " m=" + std::to_string(row.m);
        r.require(row.surjective(), at + ": not surjective");
        if (row.m >= 1 || row.n >= 1) r.require(row.injective(), at + ": not injective");
        ++matrices;
      }
    }
  r.detail = std::to_string(matrices) + " matrices";
  return r;
}

// 8. Gamma = sum of omega^n End, nothing in negative degrees, positive shifts vanish.
Result gamma_structure(const Corpora& all) {
  Result r;
  std::size_t checks = 0;
  for (const Corpus& c : all)
    for (const Entry* e : ar1_entries(c)) {
      ObstructionComplex oc(e->module, tower_for(*e));
      const auto ranks = omega_power_ranks(oc, e->lbound);
      for (int n = 0; n <= e->lbound; ++n)
        r.require(oc.gamma_dim(n) == ranks[n], tag(c, *e) + ": Gamma^" + std::to_string(n) + " != omega^n End");
      for (int n = -3; n < 0; ++n) r.require(oc.gamma_dim(n) == 0, tag(c, *e) + ": negative Gamma");
      checks += e->lbound + 4;
      if (!check_AR2(e->module).holds()) continue;
      for (int n = 0; n <= e->lbound; ++n)
        for (int m = 1; m <= 3; ++m) {
          r.require(oc.gamma_space(n, m).dim() == 0,
                    tag(c, *e) + ": Hom(N, Sigma^" + std::to_string(m) + " N (x) T^" + std::to_string(n) + ") != 0");
          ++checks;
        }
    }
  r.detail = std::to_string(checks) + " dimension identities";
  return r;
}

// 9. Kernel and cokernel of omega against the four-term sequence.
Result kernel_sequence(const Corpora& all) {
  Result r;
  std::size_t rows = 0;
  for (const Corpus& c : all)
    for (const Entry* e : ar1_entries(c)) {
      const KernelSequenceReport ks = kernel_sequence_check(e->module, std::max(2, e->lbound));
      r.require(ks.p.routes_agree(), tag(c, *e) + ": the two kernel computations differ");
      r.require(ks.p.rank_identity(), tag(c, *e) + ": dim p + dim Gamma^1 != dim Gamma^0");
      for (const auto& row : ks.rows) {
        r.require(row.ok(), tag(c, *e) + ": row n=" + std::to_string(row.n));
        ++rows;
      }
    }
  r.detail = std::to_string(rows) + " rows";
  return r;
}

SparseVec map_vector_difference(const HomSpace& space, const std::vector<SparseVec>& a, const std::vector<SparseVec>& b,
                                const Field& f) {
  SparseVec diff = as_map_vector(space, a);
  diff.add_scaled(as_map_vector(space, b), -Scalar::one(f));
  return diff;
}

// 10. Closed formula vs sigma-d-rho, chi^l vs iteration, and basis changes.
Result construction_crosscheck(const Corpora& all) {
  Result r;
  std::size_t checks = 0;
  for (const Corpus& c : all) {
    std::mt19937_64 rng(7);
    for (const Entry& e : c.entries) {
      const SemifreeModule& n = e.module;
      const auto tower = tower_for(e);
      ObstructionComplex oc(n, tower);
      const int top_d = std::min(n.max_degree() - 1, n.top_degree() + 6);
      for (int i = 0; i < e.lbound; ++i)
        for (int d = n.bottom_degree(); d <= top_d; ++d) {
          r.require(oc.w_matrix(i, d) == oc.w_plus_matrix(i, d),
                    tag(c, e) + ": w differs at i=" + std::to_string(i) + " d=" + std::to_string(d));
          ++checks;
        }
      for (int ell = 0; ell <= e.lbound; ++ell) {
        r.require(oc.chi_power(ell) == oc.chi_power_iterated(ell), tag(c, e) + ": chi^" + std::to_string(ell));
        ++checks;
      }
      const Algebra& alg = n.algebra();
      HomSpace space(n, oc.component(1));
      for (int trial = 0; trial < 5; ++trial) {
        // e'_l = u(e_l) with u unipotent lower triangular; u: N' -> N is a chain
        // isomorphism, and w must commute with it up to homotopy.
        std::vector<ModuleVector> u;
        for (std::size_t l = 0; l < n.rank(); ++l) {
          ModuleVector v = n.generator(l);
          for (std::size_t m = 0; m < l; ++m)
            v[m] = random_homogeneous(alg, n.basis_element(l).degree - n.basis_element(m).degree, rng);
          u.push_back(v);
        }
        const SemifreeModule n2 = rebase(n, u);
        const ChainMap um(n2, n, 0, u);
        ObstructionComplex oc2(n2, tower);
        const auto chi2 = oc2.chi_power(1);
        std::vector<SparseVec> lhs, rhs;
        for (std::size_t l = 0; l < n.rank(); ++l) {
          const int d = n.basis_element(l).degree;
          lhs.push_back(tensor_map_matrix(oc2, oc, um, 1, d).apply(chi2[l]));
          rhs.push_back(oc.w_matrix(0, d).apply(tensor_map_matrix(oc2, oc, um, 0, d).apply(oc2.generator(l))));
        }
        const SparseVec diff = map_vector_difference(space, lhs, rhs, c.field);
        r.require(space.is_chain_map(diff) && space.null_homotopy(diff).has_value(),
                  tag(c, e) + ": basis change trial " + std::to_string(trial));
        ++checks;
      }
    }
  }
  r.detail = std::to_string(checks) + " comparisons";
  return r;
}

// 11. Local nilpotency of w with the stated bound.
Result local_nilpotency(const Corpora& all) {
  Result r;
  std::size_t elements = 0, over_stated = 0, over_derived = 0;
  for (const Corpus& c : all)
    for (const Entry& e : c.entries) {
      const SemifreeModule& n = e.module;
      const int cap = std::min(n.max_degree(), 7);
      // w^k(x) lands in DG degree deg(x) of component i + k, which is empty once
      // i + k exceeds deg(x) - bottom + 1, so this tensor cap always suffices.
      auto tower = std::make_shared<TensorTower>(n.algebra(), n.max_degree(), cap - n.bottom_degree() + 2);
      ObstructionComplex oc(n, tower);
      for (int i = 0; i <= e.lbound; ++i)
        for (int d = n.bottom_degree(); d <= cap; ++d)
          for (std::size_t j = 0; j < oc.component(i).dim(d); ++j) {
            const auto k = oc.nilpotency_index(i, d, j);
            ++elements;
            r.require(k.has_value(), tag(c, e) + ": no nilpotency index found");
            if (!k) continue;
            const int stated = n.top_degree() - i + 1;
            const int derived = d - i - n.bottom_degree() + 1;
            if (*k > stated) {
              ++over_stated;
              r.require(false, tag(c, e) + ": n_x = " + std::to_string(*k) + " > top - i + 1 = " + std::to_string(stated) +
                                   " (i=" + std::to_string(i) + ", deg x=" + std::to_string(d) + ")");
            }
            if (*k > derived) ++over_derived;
          }
    }
  r.detail = std::to_string(elements) + " basis elements; stated bound top-i+1 exceeded by " +
             std::to_string(over_stated) + "; bound deg(x)-i-bottom+1 exceeded by " + std::to_string(over_derived);
  return r;
}

/// Every dimension the engine reports for an entry, in a fixed order.
std::vector<std::size_t> dimension_profile(const Entry& e) {
  std::vector<std::size_t> p;
  const SemifreeModule& n = e.module;
  for (int d = n.bottom_degree() - 1; d <= std::min(n.max_degree() - 1, n.top_degree() + 4); ++d)
    p.push_back(homology_dim(n, d));
  for (const auto& [k, d] : check_AR1(n).hom_dims) p.push_back(d);
  for (const auto& [k, d] : check_AR2(n).hom_dims) p.push_back(d);
  for (int s = -2; s <= 2; ++s) p.push_back(hom_K_dim(n, n, s));
  const auto tower = tower_for(e);
  for (int t = 0; t <= e.lbound; ++t)
    for (int d = 0; d <= n.max_degree(); ++d) p.push_back(tower->dim(t, d));
  ObstructionComplex oc(n, tower);
  for (int t = 0; t <= e.lbound; ++t) p.push_back(oc.gamma_dim(t));
  for (const auto& row : omega_action_table(oc, e.lbound, 3)) p.push_back(row.rank);
  const PIdealReport pr = p_ideal_dims(n);
  p.insert(p.end(), {pr.via_factorization, pr.via_kernel});
  const LiftReport lr = naive_lift_battery(n, e.lbound);
  for (const auto& v : lr.conditions) p.push_back(v.value);
  return p;
}

// 12. Q and F_p report the same dimensions.
Result backend_agreement(const Corpora& all, const std::string& dir) {
  Result r;
  const Corpus& q = all.at(0);
  const Corpus& fp = all.at(1);
  std::optional<Corpus> second;
  std::size_t numbers = 0, retried = 0;
  for (std::size_t i = 0; i < q.entries.size(); ++i) {
    const auto a = dimension_profile(q.entries[i]);
    const auto b = dimension_profile(fp.entries[i]);
    numbers += a.size();
    if (a == b) continue;
    // An unlucky prime shows up as a mismatch that a second prime does not reproduce.
    if (!second) second = load_corpus(dir, Field::prime(1000000007ULL));
    ++retried;
    r.require(dimension_profile(second->entries[i]) == a, q.entries[i].label + ": dimensions differ across backends");
  }
  r.detail = std::to_string(numbers) + " numbers per backend";
  if (retried) r.detail += ", " + std::to_string(retried) + " rerun with a second prime";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : DGLIFT_INSTANCE_DIR;
  Corpora all;
  try {
    all.push_back(load_corpus(dir, Field::rationals()));
    all.push_back(load_corpus(dir, Field::prime(Field::kDefaultPrime)));
  } catch (const std::exception& e) {
    std::cerr << "cannot load corpus: " << e.what() << "\n";
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"algebra soundness", [&] { return algebra_soundness(all); }},
      {"diagonal exactness", [&] { return diagonal_exactness(all); }},
      {"Koszul class over k[a]/(a^2)", [&] { return appendix_counterexample(all); }},
      {"omega vanishes on B^n", [&] { return frees(all); }},
      {"splitting iff omega = 0", [&] { return lemma_equivalence(all); }},
      {"nine conditions agree under AR1", [&] { return nine_conditions(all); }},
      {"omega action surjective/injective", [&] { return main_matrices(all); }},
      {"Gamma structure", [&] { return gamma_structure(all); }},
      {"kernel sequence", [&] { return kernel_sequence(all); }},
      {"construction cross-check", [&] { return construction_crosscheck(all); }},
      {"local nilpotency bound", [&] { return local_nilpotency(all); }},
      {"backend agreement", [&] { return backend_agreement(all, dir); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char head[160];
    std::snprintf(head, sizeof head, "criterion %2zu: %s  %s (%.2fs)", i + 1, r.pass ? "PASS" : "FAIL",
                  criteria[i].first.c_str(), secs);
    std::cout << head << ": " << r.detail << "\n";
    for (const auto& f : r.failures) std::cout << "    " << f << "\n";
    failed += !r.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
