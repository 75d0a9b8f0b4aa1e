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

#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "s2tcurate/error.hpp"
#include "s2tcurate/kernels.hpp"
#include "s2tcurate/llmgate.hpp"
#include "s2tcurate/toy_corpus.hpp"

using namespace s2tcurate;

namespace {

bool same(const RestoredExample& a, const RestoredExample& b) {
  return a.example == b.example && a.outcome.applied == b.outcome.applied &&
         a.outcome.status == b.outcome.status && a.outcome.residual_wer == b.outcome.residual_wer;
}

bool same(const LongFormExample& a, const LongFormExample& b) {
  return a.example == b.example && a.clip_ids == b.clip_ids && a.clean == b.clean && a.oversize == b.oversize;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("parallel scoring equals serial") {
    std::mt19937 rng(8);
    std::vector<TextPair> pairs;
    for (int i = 0; i < 3000; ++i) {
      std::string a, b;
      for (const auto& w : oracle::random_words(rng, 12, 5)) a += w + " ";
      for (const auto& w : oracle::random_words(rng, 12, 5)) b += w + " ";
      pairs.push_back({a, b, i % 7 == 0 ? "zho" : "eng"});
    }
    for (int threads : {1, 2, 4}) {
      set_max_threads(threads);
      CHECK(score_pairs_parallel(pairs, NormalizationPolicy::plain()) ==
            score_pairs_serial(pairs, NormalizationPolicy::plain()));
    }
    set_max_threads(0);
  }

  TEST_CASE("parallel restore equals serial") {
    const auto toy = make_toy_corpus(3);
    std::vector<RestoreJob> jobs;
    std::mt19937 rng(4);
    for (std::size_t i = 0; i < toy.examples.size(); ++i) {
      RestoreJob j{&toy.examples[i], std::nullopt, std::nullopt};
      if (i % 5 != 0) j.candidate = MockBackend::restore(toy.examples[i].y_tgt);
      if (i % 11 == 0) j.candidate = "completely different words";
      jobs.push_back(j);
    }
    set_max_threads(3);
    const auto s = restore_batch_serial(jobs, 0.3);
    const auto p = restore_batch_parallel(jobs, 0.3);
    set_max_threads(0);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(same(s[i], p[i]));
    CHECK(s[5].outcome.status == RestoreStatus::kRejectedNoChange);
    CHECK(s[5].example == toy.examples[5]);
    CHECK(s[11].outcome.status == RestoreStatus::kRejectedResidual);
  }

  TEST_CASE("parallel splice equals serial") {
    std::mt19937 rng(12);
    std::vector<SegmentTimeline> t;
    for (std::size_t i = 0; i < 200; ++i) t.push_back(oracle::random_timeline(rng, i));
    const auto s = splice_all_serial(t, SpliceConfig{});
    const auto p = splice_all_parallel(t, SpliceConfig{});
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      REQUIRE(s[i].size() == p[i].size());
      for (std::size_t k = 0; k < s[i].size(); ++k) REQUIRE(same(s[i][k], p[i][k]));
    }
  }

  TEST_CASE("errors inside a parallel region propagate") {
    std::vector<SegmentTimeline> t{{"r", "d", "eng", {{"a", 2, 1, "x"}}}};
    CHECK_THROWS_AS(splice_all_parallel(t, SpliceConfig{}), DataError);
  }
}
