// Serial reference kernels against their OpenMP twins.

#include "qcwb/circuit.hpp"
#include "qcwb/generators.hpp"
#include "qcwb/kernels.hpp"
#include "qcwb/model_count.hpp"
#include "qcwb/saddle.hpp"

#include <benchmark/benchmark.h>

using namespace qcwb;

namespace {

MtpInstance instance(unsigned n) {
  GenParams p;
  p.num_vars = n;
  p.degree = 4;
  p.terms = 24;
  return gen_random_poly(p, 7);
}

void BM_WitnessMasksSerial(benchmark::State& st) {
  const auto inst = instance(static_cast<unsigned>(st.range(0)));
  const auto mp = kernels::MaskPoly::from(inst.poly());
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::witness_masks_serial(mp, inst.poly().num_vars(), inst.scaled_threshold()));
}

void BM_WitnessMasksParallel(benchmark::State& st) {
  const auto inst = instance(static_cast<unsigned>(st.range(0)));
  const auto mp = kernels::MaskPoly::from(inst.poly());
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::witness_masks_parallel(mp, inst.poly().num_vars(), inst.scaled_threshold()));
}

void BM_MassProfileSerial(benchmark::State& st) {
  const auto inst = instance(static_cast<unsigned>(st.range(0)));
  const auto mp = kernels::MaskPoly::from(inst.poly());
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::mass_profile_serial(mp, inst.poly().num_vars(), inst.scaled_threshold()));
}

void BM_MassProfileParallel(benchmark::State& st) {
  const auto inst = instance(static_cast<unsigned>(st.range(0)));
  const auto mp = kernels::MaskPoly::from(inst.poly());
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::mass_profile_parallel(mp, inst.poly().num_vars(), inst.scaled_threshold()));
}

void BM_CountModelsSerial(benchmark::State& st) {
  const auto f = mtp_to_sat(instance(static_cast<unsigned>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(count_models(f));
}

void BM_CountModelsParallel(benchmark::State& st) {
  const auto f = mtp_to_sat(instance(static_cast<unsigned>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(count_models_parallel(f));
}

void BM_Level2InteriorPoint(benchmark::State& st) {
  Rng rng(3);
  const int d = static_cast<int>(st.range(0));
  const CMat R = random_observable(d * d, rng);
  for (auto _ : st) benchmark::DoNotOptimize(solve_level2(R, d, d));
}

void BM_Level2Subgradient(benchmark::State& st) {
  Rng rng(3);
  const int d = static_cast<int>(st.range(0));
  const CMat R = random_observable(d * d, rng);
  for (auto _ : st) benchmark::DoNotOptimize(solve_level2_subgradient(R, d, d, 2000));
}

}  // namespace

BENCHMARK(BM_WitnessMasksSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WitnessMasksParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MassProfileSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MassProfileParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountModelsSerial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountModelsParallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Level2InteriorPoint)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Level2Subgradient)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
