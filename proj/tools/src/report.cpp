#include <algorithm>
#include <memory>

#include "cli.hpp"
#include "dglift/liftcheck.hpp"

namespace dglift::cli {

using nlohmann::json;

namespace {

std::vector<const NamedModule*> selected(const Instance& inst, const Settings& s) {
  if (s.module) return {&inst.module(*s.module)};
  std::vector<const NamedModule*> out;
  for (const auto& m : inst.modules) out.push_back(&m);
  return out;
}

int tensor_cap(const Settings& s) { return std::max(s.max_tensor, s.lbound); }

std::shared_ptr<const TensorTower> tower_for(const SemifreeModule& n, int cap) {
  return std::make_shared<TensorTower>(n.algebra(), n.max_degree(), cap);
}

std::string format_vector(const SemifreeModule& m, const ModuleVector& v) {
  std::string out;
  for (std::size_t l = 0; l < v.size(); ++l) {
    if (v[l].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += m.basis_element(l).name;
    if (v[l] != m.algebra().one()) out += "*(" + v[l].to_string() + ")";
  }
  return out.empty() ? "0" : out;
}

json images_json(const SemifreeModule& source, const SemifreeModule& target, const std::vector<ModuleVector>& images) {
  json j = json::object();
  for (std::size_t l = 0; l < images.size(); ++l) j[source.basis_element(l).name] = format_vector(target, images[l]);
  return j;
}

json coordinates_json(const SparseVec& v) {
  json j = json::array();
  for (const auto& [i, c] : v.entries()) j.push_back({i, c.to_string()});
  return j;
}

json pairs_json(const std::vector<std::pair<int, std::size_t>>& v) {
  json j = json::array();
  for (const auto& [a, b] : v) j.push_back({a, b});
  return j;
}

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json ar1_json(const AR1Report& r) {
  return {{"holds", r.holds()},
          {"nonnegative", r.nonnegative},
          {"perfect", to_string(r.perfect)},
          {"hom_to_shifted_base", pairs_json(r.hom_dims)},
          {"bound", r.bound},
          {"first_failure", optional_int(r.first_failure)}};
}

json ar2_json(const AR2Report& r) {
  return {{"holds", r.holds()},
          {"hom_to_shifted_self", pairs_json(r.hom_dims)},
          {"bound", r.bound},
          {"first_failure", optional_int(r.first_failure)}};
}

std::string base_name(const BaseRing& b) {
  if (b.is_field()) return "k";
  return "k[" + b.generator + "]/(" + b.generator + "^" + std::to_string(b.nilpotency) + ")";
}

json algebra_json(const Algebra& alg) {
  json vars = json::array();
  for (std::size_t i = 0; i < alg.num_variables(); ++i) {
    const auto& v = alg.variable(i);
    vars.push_back({{"name", v.name}, {"degree", v.degree}, {"d", alg.generator(i).d().to_string()}});
  }
  const auto top = alg.max_extra_degree();
  return {{"base", base_name(alg.base())},
          {"variables", vars},
          {"subalgebra_prefix", alg.a_prefix()},
          {"max_extra_degree", optional_int(top)}};
}

std::string prefixed(const NamedModule& m, const std::string& what) { return m.name + ": " + what; }

}  // namespace

Outcome run_check(const Instance& inst, const Settings& s) {
  Outcome out;
  const Algebra& alg = inst.algebra;
  // d^2 = 0 and Leibniz on every basis monomial pair up to a small degree.
  const int sweep = std::min(s.max_degree, 6);
  bool d_squared = true;
  bool leibniz = true;
  for (int d = 0; d <= sweep; ++d) {
    for (const auto& m : alg.basis_in_degree(d)) {
      const Element x = alg.monomial(m, Scalar::one(alg.field()));
      if (!x.d().d().is_zero()) d_squared = false;
      for (int e = 0; d + e <= sweep; ++e)
        for (const auto& m2 : alg.basis_in_degree(e)) {
          const Element y = alg.monomial(m2, Scalar::one(alg.field()));
          const Element sign = (d % 2) ? alg.constant(Scalar(alg.field(), -1L)) : alg.one();
          if ((x * y).d() != x.d() * y + sign * x * y.d()) leibniz = false;
        }
    }
  }
  if (!d_squared) out.violations.push_back("algebra: d^2 != 0 on a basis monomial");
  if (!leibniz) out.violations.push_back("algebra: Leibniz rule fails on a basis pair");
  out.report["algebra"] = algebra_json(alg);
  out.report["algebra"]["checked_through_degree"] = sweep;
  out.report["algebra"]["d_squared_zero"] = d_squared;
  out.report["algebra"]["leibniz"] = leibniz;

  json mods = json::array();
  for (const NamedModule* nm : selected(inst, s)) {
    const SemifreeModule& n = nm->module;
    json gens = json::array();
    for (std::size_t l = 0; l < n.rank(); ++l) {
      ModuleVector dl = n.zero_vector();
      for (const auto& [m, b] : n.differential_column(l)) dl[m] = b;
      gens.push_back({{"name", n.basis_element(l).name}, {"degree", n.basis_element(l).degree},
                      {"d", format_vector(n, dl)}});
    }
    json homology = json::array();
    const int hi = std::min(n.max_degree() - 1, n.top_degree() + 4);
    for (int d = n.bottom_degree() - 1; d <= hi; ++d) homology.push_back({d, homology_dim(n, d)});
    mods.push_back({{"name", nm->name},
                    {"generators", gens},
                    {"bottom_degree", n.bottom_degree()},
                    {"top_degree", n.top_degree()},
                    {"homology", homology},
                    {"ar1", ar1_json(check_AR1(n))},
                    {"ar2", ar2_json(check_AR2(n))}});
  }
  out.report["modules"] = mods;
  return out;
}

Outcome run_hom(const Instance& inst, const Settings& s) {
  Outcome out;
  const NamedModule& src = s.module ? inst.module(*s.module) : inst.modules.front();
  const NamedModule& tgt = s.target ? inst.module(*s.target) : src;
  const HomSpace space = chain_map_space(src.module, tgt.module, s.shift);
  json classes = json::array();
  for (const auto& c : space.classes()) classes.push_back(images_json(src.module, tgt.module, decode_images(space, c)));
  json r = {{"source", src.name},       {"target", tgt.name},
            {"shift", s.shift},         {"dim", space.dim()},
            {"cycles", space.cycles().size()}, {"boundaries", space.boundaries().size()},
            {"classes", classes}};
  if (&src == &tgt && s.shift == -1) {
    if (auto k = koszul_class_check(src.module)) {
      const Algebra& alg = src.module.algebra();
      const std::vector<ModuleVector> f{{alg.zero(), alg.base_generator()}, src.module.zero_vector()};
      r["explicit_class"] = {{"map", images_json(src.module, src.module, f)},
                             {"is_chain_map", k->is_chain_map},
                             {"null_homotopic", k->null_homotopic},
                             {"h1", k->h1},
                             {"reproduced", k->reproduced()}};
      if (!k->reproduced()) out.violations.push_back(prefixed(src, "explicit negative-shift class not reproduced"));
    }
  }
  out.report["hom"] = r;
  return out;
}

Outcome run_omega(const Instance& inst, const Settings& s) {
  Outcome out;
  if (s.power < 1) throw std::invalid_argument("--n must be at least 1");
  json mods = json::array();
  for (const NamedModule* nm : selected(inst, s)) {
    ObstructionComplex c(nm->module, tower_for(nm->module, std::max(tensor_cap(s), s.power)));
    const HomSpace space = c.gamma_space(s.power);
    const SparseVec chi = as_map_vector(space, c.chi_power(s.power));
    const auto h = space.null_homotopy(chi);
    json m = {{"name", nm->name},
              {"power", s.power},
              {"null_homotopic", h.has_value()},
              {"hom_dim", space.dim()},
              {"witness", h ? coordinates_json(*h) : json(nullptr)}};
    if (s.power == 1) {
      const bool split = splitting_search(nm->module).has_value();
      m["counit_splits"] = split;
      if (split != h.has_value()) out.violations.push_back(prefixed(*nm, "splitting and omega = 0 disagree"));
    }
    mods.push_back(m);
  }
  out.report["modules"] = mods;
  return out;
}

Outcome run_battery(const Instance& inst, const Settings& s) {
  static const char* kLabels[9] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix"};
  static const char* kTitles[9] = {
      "counit N|_A (x)_A B -> N splits",
      "omega vanishes",
      "some power chi^l with l <= L is null-homotopic",
      "Gamma^0 = End and Gamma^n = 0 for 1 <= n <= L",
      "Gamma^L = 0",
      "Gamma^n = 0 for all 1 <= n <= L",
      "Gamma^n = 0 for some 1 <= n <= L",
      "Hom(N, N (x) Sigma J) = 0",
      "N is a homotopy retract of a finite free module",
  };
  Outcome out;
  json mods = json::array();
  for (const NamedModule* nm : selected(inst, s)) {
    const LiftReport r = naive_lift_battery(nm->module, s.lbound);
    json conds = json::array();
    for (std::size_t i = 0; i < 9; ++i)
      conds.push_back({{"label", kLabels[i]},
                       {"condition", kTitles[i]},
                       {"value", r.conditions[i].value},
                       {"note", r.conditions[i].note}});
    json m = {{"name", nm->name},
              {"ar1", ar1_json(r.ar1)},
              {"lbound", r.lbound},
              {"conditions", conds},
              {"end_dim", r.end_dim},
              {"gamma_dims", r.gamma_dims},
              {"nilpotency_exponent", optional_int(r.nilpotency_exponent)},
              {"omega_witness", r.omega_witness ? coordinates_json(*r.omega_witness) : json(nullptr)},
              {"lemma_agrees", r.lemma_agrees},
              {"all_agree", r.all_agree},
              {"consistent", r.consistent()}};
    if (r.splitting) m["section"] = images_json(nm->module, r.splitting->base.module, r.splitting->section.images());
    if (r.summand) {
      const auto& w = *r.summand;
      m["summand"] = {{"free_rank", w.m},
                      {"to_free", images_json(nm->module, w.g.target(), w.g.images())},
                      {"from_free", images_json(w.h.source(), nm->module, w.h.images())},
                      {"homotopy", images_json(nm->module, nm->module, w.homotopy)}};
    }
    if (!r.lemma_agrees) out.violations.push_back(prefixed(*nm, "conditions (i) and (ii) disagree"));
    if (r.ar1.holds() && !r.all_agree)
      out.violations.push_back(prefixed(*nm, "verdicts disagree although AR1 holds (potential counterexample event)"));
    mods.push_back(m);
  }
  out.report["modules"] = mods;
  return out;
}

Outcome run_gamma(const Instance& inst, const Settings& s) {
  Outcome out;
  if (s.lbound < 2) throw std::invalid_argument("gamma needs --lbound of at least 2");
  constexpr int kMaxShift = 3;
  json mods = json::array();
  for (const NamedModule* nm : selected(inst, s)) {
    const SemifreeModule& n = nm->module;
    const bool ar1 = check_AR1(n).holds();
    const bool ar2 = check_AR2(n).holds();
    ObstructionComplex c(n, tower_for(n, tensor_cap(s)));
    std::vector<std::size_t> dims;
    for (int k = 0; k <= s.lbound; ++k) dims.push_back(c.gamma_dim(k));
    const auto powers = omega_power_ranks(c, s.lbound);

    json table = json::array();
    for (const auto& row : omega_action_table(c, s.lbound, kMaxShift)) {
      table.push_back({{"n", row.n}, {"m", row.m}, {"source_dim", row.source_dim}, {"target_dim", row.target_dim},
                       {"rank", row.rank}, {"surjective", row.surjective()}, {"injective", row.injective()}});
      if (!ar1) continue;
      const std::string at = " at n = " + std::to_string(row.n) + ", m = " + std::to_string(row.m);
      if (!row.surjective()) out.violations.push_back(prefixed(*nm, "omega action not surjective" + at));
      if ((row.m >= 1 || row.n >= 1) && !row.injective())
        out.violations.push_back(prefixed(*nm, "omega action not injective" + at));
    }
    if (ar1)
      for (int k = 0; k <= s.lbound; ++k)
        if (dims[k] != powers[k])
          out.violations.push_back(prefixed(*nm, "Gamma^" + std::to_string(k) + " is not omega^n End"));

    const KernelSequenceReport ks = kernel_sequence_check(n, s.lbound);
    json rows = json::array();
    for (const auto& row : ks.rows)
      rows.push_back({{"n", row.n}, {"kernel", row.kernel}, {"cokernel", row.cokernel},
                      {"expected_kernel", row.expected_kernel}, {"expected_cokernel", row.expected_cokernel},
                      {"ok", row.ok()}});
    if (ar1 && !ks.ok()) out.violations.push_back(prefixed(*nm, "kernel sequence ranks do not balance"));
    if (!ks.p.routes_agree()) out.violations.push_back(prefixed(*nm, "the two computations of the kernel of omega differ"));

    json m = {{"name", nm->name},
              {"ar1", ar1},
              {"ar2", ar2},
              {"gamma_dims", dims},
              {"omega_power_ranks", powers},
              {"omega_action", table},
              {"kernel_sequence", rows},
              {"p_ideal", {{"via_factorization", ks.p.via_factorization}, {"via_kernel", ks.p.via_kernel},
                           {"end_dim", ks.p.end_dim}, {"gamma0", ks.p.gamma0}, {"gamma1", ks.p.gamma1}}}};
    if (ar1 && ar2) {
      json vanish = json::array();
      for (int k = 0; k <= s.lbound; ++k)
        for (int shift = 1; shift <= kMaxShift; ++shift) {
          const std::size_t d = c.gamma_space(k, shift).dim();
          vanish.push_back({{"n", k}, {"m", shift}, {"dim", d}});
          if (d != 0)
            out.violations.push_back(prefixed(*nm, "Hom(N, Sigma^" + std::to_string(shift) + " N (x) T^" +
                                                       std::to_string(k) + ") is nonzero"));
        }
      m["positive_shift_hom"] = vanish;
    }
    mods.push_back(m);
  }
  out.report["modules"] = mods;
  return out;
}

Outcome run_appendix(const Instance& inst, const Settings& s) {
  Outcome out;
  json mods = json::array();
  for (const NamedModule* nm : selected(inst, s)) {
    const AppendixEntry e = appendix_check(nm->name, nm->module);
    json m = {{"name", nm->name},
              {"resolution_like", e.resolution_like},
              {"nonnegative_homology", e.nonnegative_homology},
              {"algebra_acyclic", e.algebra_acyclic},
              {"hom_to_negative_self", pairs_json(e.self_negative)},
              {"hom_to_negative_base", pairs_json(e.to_base_negative)},
              {"proposition_holds", e.proposition_holds()},
              {"corollary_holds", e.corollary_holds()}};
    if (e.koszul) {
      m["explicit_class"] = {{"is_chain_map", e.koszul->is_chain_map}, {"null_homotopic", e.koszul->null_homotopic},
                             {"hom_dim", e.koszul->hom_dim}, {"h1", e.koszul->h1},
                             {"reproduced", e.koszul->reproduced()}};
      if (!e.koszul->reproduced()) out.violations.push_back(prefixed(*nm, "explicit negative-shift class not reproduced"));
    }
    if (!e.proposition_holds()) out.violations.push_back(prefixed(*nm, "negative self-maps on a resolution"));
    if (!e.corollary_holds()) out.violations.push_back(prefixed(*nm, "negative maps to the base"));
    mods.push_back(m);
  }
  out.report["modules"] = mods;
  return out;
}

}  // namespace dglift::cli
