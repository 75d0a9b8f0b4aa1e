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

#include "s2tcurate/kernels.hpp"

namespace s2tcurate {

std::vector<EditCounts> score_pairs_serial(std::span<const TextPair> pairs,
                                           const NormalizationPolicy& policy,
                                           const LanguageConventions& conv) {
  std::vector<EditCounts> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(error_counts(p.ref, p.hyp, p.language, policy, conv));
  return out;
}

RestoredExample restore_job(const RestoreJob& job, double reject_threshold,
                            const LanguageConventions& conv) {
  if (!job.candidate) {
    RestoredExample r{*job.example, {}, std::nullopt};
    r.outcome.original = job.example->y_tgt;
    r.outcome.applied = job.example->y_tgt;
    r.outcome.status = RestoreStatus::kRejectedNoChange;
    return r;
  }
  return restore_example(*job.example, *job.candidate, reject_threshold, job.src_candidate, conv);
}

std::vector<RestoredExample> restore_batch_serial(std::span<const RestoreJob> jobs,
                                                  double reject_threshold,
                                                  const LanguageConventions& conv) {
  std::vector<RestoredExample> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) out.push_back(restore_job(job, reject_threshold, conv));
  return out;
}

std::vector<std::vector<LongFormExample>> splice_all_serial(std::span<const SegmentTimeline> timelines,
                                                            const SpliceConfig& config) {
  std::vector<std::vector<LongFormExample>> out;
  out.reserve(timelines.size());
  for (const auto& t : timelines) out.push_back(splice(t, config));
  return out;
}

}  // namespace s2tcurate
