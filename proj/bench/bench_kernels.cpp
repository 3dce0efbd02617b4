#include <benchmark/benchmark.h>

#include "substrata/kernels.hpp"
#include "substrata/spec_io.hpp"

using namespace substrata;

namespace {

kernels::SamplerInput sampler(const RandomSubstitution& s, std::uint64_t samples) {
  kernels::SamplerInput in;
  in.s = &s;
  for (std::size_t a = 0; a < s.size(); ++a)
    in.weights.emplace_back(s.images(static_cast<Letter>(a)).size(), 1.0 / s.images(static_cast<Letter>(a)).size());
  in.level = 4;
  in.K = 3;
  in.seed = 1;
  in.samples = samples;
  return in;
}

const RandomSubstitution& example() {
  static const RandomSubstitution s = builtin_spec("ergodic_abc").s;
  return s;
}

std::vector<Word> parents(std::size_t K) {
  std::vector<Word> out;
  for (const auto& w : language(example(), K))
    if (w.size() == K) out.push_back(w);
  return out;
}

void BM_SampleSerial(benchmark::State& st) {
  const auto in = sampler(example(), static_cast<std::uint64_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::sample_frequencies(in));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SampleOpenMP(benchmark::State& st) {
  const auto in = sampler(example(), static_cast<std::uint64_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::omp::sample_frequencies(in));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_TransferSerial(benchmark::State& st) {
  const auto P = uniform_choice<double>(example());
  const auto ps = parents(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::transfer_columns(P, ps, st.range(0)));
}

void BM_TransferOpenMP(benchmark::State& st) {
  const auto P = uniform_choice<double>(example());
  const auto ps = parents(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::omp::transfer_columns(P, ps, st.range(0)));
}

}  // namespace

BENCHMARK(BM_SampleSerial)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleOpenMP)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransferSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransferOpenMP)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
