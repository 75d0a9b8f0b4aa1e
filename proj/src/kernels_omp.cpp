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

#include <atomic>
#include <exception>
#include <mutex>

#include "s2tcurate/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace s2tcurate {

namespace {

std::atomic<int> g_max_threads{0};

int thread_budget() {
#ifdef _OPENMP
  const int cap = g_max_threads.load();
  return cap > 0 ? cap : omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for i in [0, n) across threads.  The first exception thrown
// by any iteration is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_budget())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }
int max_threads() { return thread_budget(); }

std::vector<EditCounts> score_pairs_parallel(std::span<const TextPair> pairs,
                                             const NormalizationPolicy& policy,
                                             const LanguageConventions& conv) {
  std::vector<EditCounts> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    out[i] = error_counts(pairs[i].ref, pairs[i].hyp, pairs[i].language, policy, conv);
  });
  return out;
}

std::vector<RestoredExample> restore_batch_parallel(std::span<const RestoreJob> jobs,
                                                    double reject_threshold,
                                                    const LanguageConventions& conv) {
  std::vector<RestoredExample> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { out[i] = restore_job(jobs[i], reject_threshold, conv); });
  return out;
}

std::vector<std::vector<LongFormExample>> splice_all_parallel(std::span<const SegmentTimeline> timelines,
                                                              const SpliceConfig& config) {
  std::vector<std::vector<LongFormExample>> out(timelines.size());
  parallel_for(timelines.size(), [&](std::size_t i) { out[i] = splice(timelines[i], config); });
  return out;
}

}  // namespace s2tcurate
