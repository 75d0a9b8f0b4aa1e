// Copyright 2026 The s2tcurate Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels on toy-corpus-shaped data.
//
//   ./build/bench/bench_kernels --benchmark_filter=Score

#include <benchmark/benchmark.h>

#include <random>

#include "s2tcurate/kernels.hpp"
#include "s2tcurate/llmgate.hpp"
#include "s2tcurate/toy_corpus.hpp"

using namespace s2tcurate;

namespace {

const ToyCorpus& corpus() {
  static const ToyCorpus c = make_toy_corpus(1, 20'000, 0.10, 50);
  return c;
}

const std::vector<TextPair>& pairs() {
  static const std::vector<TextPair> p = [] {
    std::vector<TextPair> out;
    const auto& c = corpus();
    for (std::size_t i = 0; i < c.examples.size(); ++i) {
      out.push_back({c.examples[i].y_tgt, c.hypotheses[i].text, "eng"});
    }
    return out;
  }();
  return p;
}

const std::vector<std::string>& candidates() {
  static const std::vector<std::string> c = [] {
    std::vector<std::string> out;
    for (const auto& e : corpus().examples) out.push_back(MockBackend::restore(e.y_tgt));
    return out;
  }();
  return c;
}

std::vector<RestoreJob> jobs() {
  std::vector<RestoreJob> out;
  const auto& c = corpus();
  for (std::size_t i = 0; i < c.examples.size(); ++i) out.push_back({&c.examples[i], candidates()[i], std::nullopt});
  return out;
}

void BM_ScoreSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(score_pairs_serial(pairs(), policy_for(Metric::kCer)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pairs().size()));
}

void BM_ScoreParallel(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(score_pairs_parallel(pairs(), policy_for(Metric::kCer)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pairs().size()));
  set_max_threads(0);
}

void BM_RestoreSerial(benchmark::State& state) {
  const auto j = jobs();
  for (auto _ : state) benchmark::DoNotOptimize(restore_batch_serial(j, kDefaultRejectThreshold));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(j.size()));
}

void BM_RestoreParallel(benchmark::State& state) {
  const auto j = jobs();
  set_max_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(restore_batch_parallel(j, kDefaultRejectThreshold));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(j.size()));
  set_max_threads(0);
}

void BM_SpliceSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(splice_all_serial(corpus().timelines, SpliceConfig{}));
}

void BM_SpliceParallel(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(splice_all_parallel(corpus().timelines, SpliceConfig{}));
  set_max_threads(0);
}

}  // namespace

BENCHMARK(BM_ScoreSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RestoreSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RestoreParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpliceSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpliceParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
