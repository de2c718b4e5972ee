#include "dglift/liftcheck.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace dglift {

namespace {

int generator_top(const SemifreeModule& n) { return n.rank() == 0 ? 0 : std::max(0, n.top_degree()); }

ModuleVector add(ModuleVector a, const ModuleVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

ModuleVector sub(ModuleVector a, const ModuleVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] - b[i];
  return a;
}

// d h(e_l) + sum_m h(e_m) b_ml for a degree-1 map h out of src (no shift).
ModuleVector homotopy_boundary(const SemifreeModule& src, const SemifreeModule& dst,
                               const std::vector<ModuleVector>& h, std::size_t l) {
  ModuleVector v = dst.apply_differential(h[l]);
  for (const auto& [m, b] : src.differential_column(l)) v = add(v, dst.act(h[m], b));
  return v;
}

// counit o f as a map vector of Hom(N, N), for f a map vector of Hom(N, base change).
SparseVec compose_counit(const BaseChange& bc, const HomSpace& into_bc, const HomSpace& into_n, const SparseVec& f) {
  std::vector<ModuleVector> images;
  for (const auto& v : decode_images(into_bc, f)) images.push_back(bc.counit.apply(v));
  return encode_images(into_n, images);
}

std::shared_ptr<const TensorTower> tower_for(const SemifreeModule& n, int max_tensor) {
  return std::make_shared<TensorTower>(n.algebra(), n.max_degree(), max_tensor);
}

PIdealReport p_ideal_with(const ObstructionComplex& c) {
  const SemifreeModule& n = c.module();
  PIdealReport r;
  HomSpace end = chain_map_space(n, n, 0);
  r.end_dim = end.dim();
  r.gamma0 = c.gamma_dim(0);
  r.gamma1 = c.gamma_dim(1);

  BaseChange bc = base_change(n, generator_top(n) + 1);
  HomSpace into_bc = chain_map_space(n, bc.module, 0);
  Echelon image;
  for (const auto& z : into_bc.classes()) image.insert(end.class_coordinates(compose_counit(bc, into_bc, end, z)));
  r.via_factorization = image.rank();

  const SparseMatrix omega0 = c.omega_action_matrix(0, 0);
  r.via_kernel = omega0.cols() - rank(omega0);
  return r;
}

}  // namespace

std::optional<Splitting> splitting_search(const SemifreeModule& n) {
  BaseChange bc = base_change(n, generator_top(n));
  HomSpace into_bc = chain_map_space(n, bc.module, 0);
  HomSpace end = chain_map_space(n, n, 0);
  // sigma = sum x_j z_j over a basis of chain maps, with counit o sigma = id.
  const auto& cycles = into_bc.cycles();
  SparseMatrix system(end.map_size(), cycles.size());
  for (std::size_t j = 0; j < cycles.size(); ++j) system.set_column(j, compose_counit(bc, into_bc, end, cycles[j]));
  const SparseVec id = encode_images(end, identity_map(n).images());
  auto x = solve(n.algebra().field(), system, id);
  if (!x) return std::nullopt;
  SparseVec sigma;
  for (const auto& [j, c] : x->entries()) sigma.add_scaled(cycles[j], c);
  ChainMap section = map_from_vector(into_bc, sigma);
  for (std::size_t l = 0; l < n.rank(); ++l)
    if (bc.counit.apply(section.image(l)) != n.generator(l)) throw std::logic_error("splitting failed its recheck");
  return Splitting{std::move(bc), std::move(section)};
}

SummandWitness summand_witness(const SemifreeModule& n, const Splitting& split) {
  const BaseChange& bc = split.base;
  const SemifreeModule& f = bc.module;
  const Algebra& alg = n.algebra();
  std::vector<ModuleVector> sigma = split.section.images();
  std::vector<ModuleVector> k(n.rank(), n.zero_vector());

  for (int level = generator_top(n); level >= 1; --level) {
    std::vector<std::size_t> idx;
    std::vector<int> degrees;
    for (std::size_t g = 0; g < f.rank(); ++g)
      if (f.basis_element(g).degree == level) {
        idx.push_back(g);
        degrees.push_back(level);
      }
    if (idx.empty()) continue;
    // The component of sigma in F_{level+1} / F_level, a sum of copies of Sigma^level B.
    SemifreeModule q = free_module(alg, degrees, n.max_degree());
    std::vector<ModuleVector> comp;
    for (const auto& v : sigma) {
      ModuleVector c;
      for (std::size_t g : idx) c.push_back(v[g]);
      comp.push_back(std::move(c));
    }
    auto w = is_null_homotopic(ChainMap(n, q, 0, comp));
    if (!w)
      throw Error(ErrorKind::FiltrationStuck,
                  "component in generator degree " + std::to_string(level) + " is not null-homotopic");
    std::vector<ModuleVector> lifted;
    for (const auto& s : w->h) {
      ModuleVector v = f.zero_vector();
      for (std::size_t j = 0; j < idx.size(); ++j) v[idx[j]] = s[j];
      lifted.push_back(std::move(v));
    }
    for (std::size_t l = 0; l < n.rank(); ++l) {
      sigma[l] = sub(sigma[l], homotopy_boundary(n, f, lifted, l));
      k[l] = sub(k[l], bc.counit.apply(lifted[l]));
    }
    for (const auto& v : sigma)
      for (std::size_t g : idx)
        if (!v[g].is_zero()) throw std::logic_error("correction left a component in the filtration step");
  }

  std::vector<std::size_t> bottom;
  std::vector<int> zeros;
  for (std::size_t g = 0; g < f.rank(); ++g) {
    if (f.basis_element(g).degree == 0) {
      bottom.push_back(g);
      zeros.push_back(0);
    }
  }
  for (const auto& v : sigma)
    for (std::size_t g = 0; g < f.rank(); ++g)
      if (f.basis_element(g).degree != 0 && !v[g].is_zero())
        throw Error(ErrorKind::FiltrationStuck, "section does not reach the bottom of the filtration");

  SemifreeModule free = free_module(alg, zeros, n.max_degree());
  std::vector<ModuleVector> g_images;
  for (const auto& v : sigma) {
    ModuleVector c;
    for (std::size_t g : bottom) c.push_back(v[g]);
    g_images.push_back(std::move(c));
  }
  std::vector<ModuleVector> h_images;
  for (std::size_t g : bottom) h_images.push_back(bc.counit.image(g));
  SummandWitness out{bottom.size(), ChainMap(n, free, 0, std::move(g_images)), ChainMap(free, n, 0, std::move(h_images)),
                     std::move(k)};

  for (std::size_t l = 0; l < n.rank(); ++l) {
    const ModuleVector hg = out.h.apply(out.g.image(l));
    if (sub(hg, n.generator(l)) != homotopy_boundary(n, n, out.homotopy, l))
      throw std::logic_error("summand witness failed its recheck");
  }
  return out;
}

LiftReport naive_lift_battery(const SemifreeModule& n, int lbound) {
  if (lbound < 1) throw std::invalid_argument("lift bound must be at least 1");
  LiftReport r;
  r.lbound = lbound;
  r.ar1 = check_AR1(n);
  ObstructionComplex c(n, tower_for(n, lbound));
  auto& cond = r.conditions;

  r.splitting = splitting_search(n);
  cond[0] = {r.splitting.has_value(), r.splitting ? "section found" : "no section: linear system inconsistent"};

  r.omega_witness = c.omega_witness();
  cond[1] = {r.omega_witness.has_value(), r.omega_witness ? "null-homotopy stored" : "no null-homotopy"};

  for (int ell = 1; ell <= lbound && !r.nilpotency_exponent; ++ell) {
    HomSpace space = c.gamma_space(ell);
    if (space.null_homotopy(as_map_vector(space, c.chi_power(ell)))) r.nilpotency_exponent = ell;
  }
  cond[2] = {r.nilpotency_exponent.has_value(),
             r.nilpotency_exponent ? "chi^" + std::to_string(*r.nilpotency_exponent) + " is null-homotopic"
                                   : "no nilpotency up to " + std::to_string(lbound)};

  r.end_dim = hom_K_dim(n, n, 0);
  for (int k = 0; k <= lbound; ++k) r.gamma_dims.push_back(c.gamma_dim(k));
  const bool positive_vanish =
      std::all_of(r.gamma_dims.begin() + 1, r.gamma_dims.end(), [](std::size_t d) { return d == 0; });
  const bool some_vanish =
      std::any_of(r.gamma_dims.begin() + 1, r.gamma_dims.end(), [](std::size_t d) { return d == 0; });
  const std::string range = "checked for 1 <= n <= " + std::to_string(lbound);
  cond[3] = {r.gamma_dims[0] == r.end_dim && positive_vanish, range};
  cond[4] = {r.gamma_dims.back() == 0, "Gamma^" + std::to_string(lbound) + " = 0 bounds the generators"};
  cond[5] = {positive_vanish, range};
  cond[6] = {some_vanish, range};

  HomSpace into_j(n, TargetSpace(n, std::make_shared<TensorPowerCarrier>(c.tower_ptr(), 1), 1));
  cond[7] = {into_j.dim() == 0, "dim Hom(N, N (x) Sigma J) = " + std::to_string(into_j.dim())};

  if (r.splitting) {
    try {
      r.summand = summand_witness(n, *r.splitting);
      cond[8] = {true, "retract of B^" + std::to_string(r.summand->m)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FiltrationStuck) throw;
      cond[8] = {false, e.what()};
    }
  } else {
    cond[8] = {false, "no section to push down"};
  }

  r.lemma_agrees = cond[0].value == cond[1].value;
  r.all_agree = std::all_of(cond.begin(), cond.end(), [&](const Verdict& v) { return v.value == cond[0].value; });
  return r;
}

PIdealReport p_ideal_dims(const SemifreeModule& n, int max_tensor) {
  return p_ideal_with(ObstructionComplex(n, tower_for(n, std::max(1, max_tensor))));
}

bool KernelSequenceReport::ok() const {
  return p.consistent() && std::all_of(rows.begin(), rows.end(), [](const KernelSequenceRow& r) { return r.ok(); });
}

KernelSequenceReport kernel_sequence_check(const SemifreeModule& n, int lbound) {
  if (lbound < 2) throw std::invalid_argument("kernel sequence check needs a bound of at least 2");
  ObstructionComplex c(n, tower_for(n, lbound));
  KernelSequenceReport r;
  r.p = p_ideal_with(c);
  r.rows.push_back({-1, 0, c.gamma_dim(0), 0, r.p.end_dim});
  for (int k = 0; k < lbound; ++k) {
    const SparseMatrix m = c.omega_action_matrix(k, 0);
    const std::size_t rk = rank(m);
    KernelSequenceRow row{k, m.cols() - rk, m.rows() - rk, 0, 0};
    if (k == 0) row.expected_kernel = r.p.via_factorization;
    r.rows.push_back(row);
  }
  return r;
}

std::vector<OmegaActionRow> omega_action_table(const ObstructionComplex& c, int lbound, int max_shift) {
  std::vector<OmegaActionRow> out;
  for (int n = 0; n < lbound; ++n)
    for (int m = 0; m <= max_shift; ++m) {
      const SparseMatrix mat = c.omega_action_matrix(n, m);
      out.push_back({n, m, mat.cols(), mat.rows(), rank(mat)});
    }
  return out;
}

std::vector<std::size_t> omega_power_ranks(const ObstructionComplex& c, int lbound) {
  std::vector<std::size_t> out;
  SparseMatrix acc = SparseMatrix::identity(c.module().algebra().field(), c.gamma_dim(0));
  out.push_back(rank(acc));
  for (int n = 0; n < lbound; ++n) {
    acc = c.omega_action_matrix(n, 0).compose(acc);
    out.push_back(rank(acc));
  }
  return out;
}

std::optional<KoszulClassCheck> koszul_class_check(const SemifreeModule& n) {
  const Algebra& alg = n.algebra();
  // The example lives over k[a]/(a^2) itself; over an extension the class may die.
  if (alg.base().is_field() || alg.base().nilpotency != 2 || alg.num_variables() != 0 || n.rank() != 2)
    return std::nullopt;
  if (n.basis_element(0).degree != 0 || n.basis_element(1).degree != 1) return std::nullopt;
  const Element a = alg.base_generator();
  if (n.entry(0, 1) != a) return std::nullopt;

  KoszulClassCheck r;
  const std::vector<ModuleVector> images{ModuleVector{alg.zero(), a}, n.zero_vector()};
  r.is_chain_map = chain_map_defect(n, n, -1, images).empty();
  if (r.is_chain_map) r.null_homotopic = is_null_homotopic(ChainMap(n, n, -1, images)).has_value();
  r.hom_dim = hom_K_dim(n, n, -1);
  r.h1 = homology_dim(n, 1);
  return r;
}

bool AppendixEntry::proposition_holds() const {
  if (!resolution_like) return true;
  return std::all_of(self_negative.begin(), self_negative.end(), [](const auto& p) { return p.second == 0; });
}

bool AppendixEntry::corollary_holds() const {
  if (!algebra_acyclic || !nonnegative_homology) return true;
  return std::all_of(to_base_negative.begin(), to_base_negative.end(), [](const auto& p) { return p.second == 0; });
}

AppendixEntry appendix_check(const std::string& name, const SemifreeModule& n, int negative_range) {
  AppendixEntry e;
  e.name = name;
  const Algebra& alg = n.algebra();
  const int lo = n.rank() == 0 ? 0 : n.bottom_degree() - 1;
  const int hi = std::min(n.max_degree() - 1, generator_top(n) + 6);
  e.resolution_like = true;
  e.nonnegative_homology = true;
  for (int d = lo; d <= hi; ++d) {
    const std::size_t h = homology_dim(n, d);
    if (h != 0 && d != 0) e.resolution_like = false;
    if (h != 0 && d < 0) e.nonnegative_homology = false;
  }
  SemifreeModule b = free_module(alg, {0}, n.max_degree());
  e.algebra_acyclic = true;
  for (int d = 1; d <= std::min(b.max_degree() - 1, 8); ++d)
    if (homology_dim(b, d) != 0) e.algebra_acyclic = false;
  for (int l = -1; l >= -negative_range; --l) {
    e.self_negative.emplace_back(l, hom_K_dim(n, n, l));
    e.to_base_negative.emplace_back(l, hom_K_dim(n, b, l));
  }
  e.koszul = koszul_class_check(n);
  return e;
}

}  // namespace dglift
