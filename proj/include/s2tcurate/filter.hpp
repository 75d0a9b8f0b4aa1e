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

#pragma once

// CER-based example filtering: rank by error rate against seed-model
// hypotheses, discard the worst k percent, group languages by mean CER and
// draw proxy-task samples.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2tcurate/jsonl.hpp"
#include "s2tcurate/manifest.hpp"
#include "s2tcurate/textnorm.hpp"

namespace s2tcurate {

enum class DiscardBasis {
  kCount,     // floor(n * k / 100) examples
  kDuration,  // worst examples while their total duration <= k% of the partition
};

// Per-dataset k used for the long-form corpora with untranscribed clips.
// Keys are dataset keys (see dataset_key()).
std::map<std::string, double> default_k_overrides();

// Lowercased, alphanumerics only: "LibriSpeech", "libri_speech" -> "librispeech".
std::string dataset_key(std::string_view dataset);

struct FilterConfig {
  double k_percent = 5.0;
  std::size_t group_size = 5;
  std::size_t proxy_n = 50'000;
  std::uint64_t seed = 0;
  std::map<std::string, double> per_dataset_overrides = default_k_overrides();
  DiscardBasis basis = DiscardBasis::kCount;
  Metric metric = Metric::kCer;

  // Throws ConfigError.
  void validate() const;
  double k_for(std::string_view dataset) const;
};

enum class Verdict { kKeep, kDiscard };
std::string_view verdict_name(Verdict v);

struct ScoredExample {
  std::string id;
  double cer = 0.0;
  double duration_sec = 0.0;  // used only with DiscardBasis::kDuration
};

struct FilterDecision {
  std::string example_id;
  double cer = 0.0;
  std::size_t rank = 0;  // 1 = worst
  Verdict verdict = Verdict::kKeep;
};

std::size_t discard_count(std::size_t n, double k_percent);

// Decisions come back in input order.  Sort key: cer descending, then id
// ascending.  Throws ConfigError for k outside [0, 100] or a negative cer.
std::vector<FilterDecision> rank_and_discard(std::span<const ScoredExample> scored, double k_percent,
                                             DiscardBasis basis = DiscardBasis::kCount);

// Ascending by mean CER (ties by language code), chunked into groups of
// group_size; the last group may be smaller.
std::vector<std::vector<std::string>> group_languages(
    const std::map<std::string, double>& per_language_mean_cer, std::size_t group_size);

std::size_t proxy_target_size(std::size_t n, double k_percent);

// Uniform sample without replacement of min(round(N(1-k/100)), |kept|) ids,
// deterministic for a given seed and independent of input order.  Returned
// sorted.
std::vector<std::string> proxy_sample(std::span<const std::string> kept, double k_percent,
                                      std::size_t n, std::uint64_t seed);

// Corpus-level driver ------------------------------------------------------

struct CorpusDecision {
  std::string example_id;
  std::string dataset;
  std::optional<double> cer;  // unset: no hypothesis, kept unscored
  std::size_t rank = 0;
  Verdict verdict = Verdict::kKeep;
  double k_percent = 0.0;
};

struct FilterResult {
  std::vector<CorpusDecision> decisions;  // manifest order
  std::vector<Example> kept;
  std::size_t discarded = 0;
  std::size_t unscored = 0;
  std::map<std::string, double> language_mean_cer;
  std::vector<std::vector<std::string>> language_groups;
};

// Scores y_src against the hypotheses (ASR proxy for every task), then ranks
// and discards per dataset.
FilterResult filter_corpus(const std::vector<Example>& examples, const std::vector<IdText>& hyps,
                           const FilterConfig& config);

}  // namespace s2tcurate
