// Copyright 2026 The idtest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <memory>
#include <vector>

#include "benchmark/benchmark.h"
#include "idtest/bucketing.h"
#include "idtest/distribution.h"
#include "idtest/instances.h"
#include "idtest/random.h"
#include "idtest/sample_stream.h"
#include "idtest/tester.h"

namespace {

using namespace idtest;

void BM_BucketIndex(benchmark::State& state) {
  const auto scheme = build_scheme(static_cast<std::size_t>(state.range(0)), 0.5, 100);
  Rng rng(1);
  std::vector<double> probs(4096);
  for (double& x : probs) x = rng.uniform01() * 4.0 / static_cast<double>(state.range(0));
  std::size_t i = 0, sink = 0;
  for (auto _ : state) {
    sink += bucket_index(scheme, probs[i++ & 4095]);
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BucketIndex)->RangeMultiplier(16)->Range(1 << 10, 1 << 22);

void BM_AliasDraw(benchmark::State& state) {
  auto sampler = build_sampler(zipf_pmf(static_cast<std::size_t>(state.range(0)), 1.0), 7);
  std::size_t sink = 0;
  for (auto _ : state) sink += sampler.draw();
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AliasDraw)->RangeMultiplier(16)->Range(1 << 10, 1 << 22);

void BM_AliasBuild(benchmark::State& state) {
  const auto p = zipf_pmf(static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) {
    AliasTable table(p);
    benchmark::DoNotOptimize(table);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AliasBuild)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);

template <Pipeline kPipeline>
void BM_Tester(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = uniform_pmf(n);
  const auto table = std::make_shared<const AliasTable>(p);
  TesterConfig config = TesterConfig::calibrated();
  std::uint64_t seed = 0, samples = 0, queries = 0;
  for (auto _ : state) {
    config.master_seed = ++seed;
    AliasSampler source(table, derive_seed(seed, StreamTag::kQSource));
    const Verdict v = kPipeline == Pipeline::kBaseline ? baseline_test(p, source, config)
                                                       : identity_test(p, source, config);
    samples += v.q_samples_used;
    queries += v.p_queries_used;
  }
  const double runs = static_cast<double>(state.iterations());
  state.counters["q_samples"] = static_cast<double>(samples) / runs;
  state.counters["p_queries"] = static_cast<double>(queries) / runs;
}
BENCHMARK(BM_Tester<Pipeline::kEfficient>)->Name("BM_IdentityTest")->RangeMultiplier(4)->Range(1 << 10, 1 << 20)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Tester<Pipeline::kBaseline>)->Name("BM_BaselineTest")->RangeMultiplier(4)->Range(1 << 10, 1 << 20)
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
