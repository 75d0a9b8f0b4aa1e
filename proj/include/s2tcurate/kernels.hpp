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

// Data-parallel batch kernels.  Each has a serial reference implementation
// (kernels_serial.cpp) and an OpenMP one (kernels_omp.cpp); both must return
// identical results in input order.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "s2tcurate/align.hpp"
#include "s2tcurate/longform.hpp"
#include "s2tcurate/restore.hpp"

namespace s2tcurate {

// Caps the worker count for the parallel kernels; 0 restores the default.
void set_max_threads(int n);
int max_threads();

// Per-pair edit counts.
std::vector<EditCounts> score_pairs_serial(std::span<const TextPair> pairs,
                                           const NormalizationPolicy& policy,
                                           const LanguageConventions& conv = LanguageConventions::defaults());
std::vector<EditCounts> score_pairs_parallel(std::span<const TextPair> pairs,
                                             const NormalizationPolicy& policy,
                                             const LanguageConventions& conv = LanguageConventions::defaults());

struct RestoreJob {
  const Example* example = nullptr;
  std::optional<std::string> candidate;  // unset: no usable candidate
  std::optional<std::string> src_candidate;
};

// Examples without a candidate pass through unchanged with status
// rejected_no_change.
RestoredExample restore_job(const RestoreJob& job, double reject_threshold,
                            const LanguageConventions& conv = LanguageConventions::defaults());
std::vector<RestoredExample> restore_batch_serial(std::span<const RestoreJob> jobs,
                                                  double reject_threshold,
                                                  const LanguageConventions& conv = LanguageConventions::defaults());
std::vector<RestoredExample> restore_batch_parallel(std::span<const RestoreJob> jobs,
                                                    double reject_threshold,
                                                    const LanguageConventions& conv = LanguageConventions::defaults());

std::vector<std::vector<LongFormExample>> splice_all_serial(std::span<const SegmentTimeline> timelines,
                                                            const SpliceConfig& config);
std::vector<std::vector<LongFormExample>> splice_all_parallel(std::span<const SegmentTimeline> timelines,
                                                              const SpliceConfig& config);

}  // namespace s2tcurate
