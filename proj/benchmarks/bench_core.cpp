#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <string>

#include "dglift/instance.hpp"
#include "dglift/liftcheck.hpp"

using namespace dglift;

namespace {

Field field_for(int64_t which) { return which == 0 ? Field::rationals() : Field::prime(Field::kDefaultPrime); }

SparseMatrix random_matrix(const Field& f, std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<long> value(-9, 9);
  SparseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    SparseVec col;
    for (std::size_t i = 0; i < n; ++i)
      if (coin(rng) < density) col.add(i, Scalar(f, value(rng)));
    m.set_column(j, std::move(col));
  }
  return m;
}

Instance load(const std::string& file, const Field& f) {
  ParseOptions opts;
  opts.field = f;
  return load_instance(std::string(DGLIFT_INSTANCE_DIR) + "/" + file, opts);
}

void BM_Rank(benchmark::State& state) {
  const Field f = field_for(state.range(1));
  const SparseMatrix m = random_matrix(f, static_cast<std::size_t>(state.range(0)), 0.05, 42);
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
  state.SetLabel(f.name());
}
BENCHMARK(BM_Rank)->ArgsProduct({{64, 128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TensorTower(benchmark::State& state) {
  const Field f = field_for(state.range(0));
  const Instance inst = load("ext2.dg", f);
  for (auto _ : state) {
    TensorTower tower(inst.algebra, 9, 3);
    std::size_t total = 0;
    for (int n = 0; n <= 3; ++n)
      for (int d = 0; d <= 9; ++d) total += tower.dim(n, d);
    benchmark::DoNotOptimize(total);
  }
  state.SetLabel(f.name());
}
BENCHMARK(BM_TensorTower)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HomSpace(benchmark::State& state) {
  const Field f = field_for(state.range(0));
  const Instance inst = load("poly.dg", f);
  const SemifreeModule& n = inst.module("Cw").module;
  for (auto _ : state) benchmark::DoNotOptimize(hom_K_dim(n, n, 0));
  state.SetLabel(f.name());
}
BENCHMARK(BM_HomSpace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Battery(benchmark::State& state, const std::string& file, const std::string& module) {
  const Field f = field_for(state.range(0));
  const Instance inst = load(file, f);
  const SemifreeModule& n = inst.module(module).module;
  for (auto _ : state) benchmark::DoNotOptimize(naive_lift_battery(n, 3).all_agree);
  state.SetLabel(f.name());
}
BENCHMARK_CAPTURE(BM_Battery, I2, std::string("I2.dg"), std::string("I2"))->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Battery, ext2_P, std::string("ext2.dg"), std::string("P"))->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Battery, poly_Cw, std::string("poly.dg"), std::string("Cw"))->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OmegaActionTable(benchmark::State& state) {
  const Field f = field_for(state.range(0));
  const Instance inst = load("ext2.dg", f);
  const SemifreeModule& n = inst.module("Q").module;
  for (auto _ : state) {
    ObstructionComplex c(n, std::make_shared<TensorTower>(inst.algebra, n.max_degree(), 3));
    benchmark::DoNotOptimize(omega_action_table(c, 3, 3).size());
  }
  state.SetLabel(f.name());
}
BENCHMARK(BM_OmegaActionTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
