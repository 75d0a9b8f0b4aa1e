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

// Synthetic corpus with known ground truth for end-to-end runs: clean
// lowercase transcripts, seed-model hypotheses with a fixed fraction of
// badly misaligned examples, and a segment timeline where those examples'
// clips are untranscribed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "s2tcurate/jsonl.hpp"
#include "s2tcurate/longform.hpp"
#include "s2tcurate/manifest.hpp"

namespace s2tcurate {

struct ToyCorpus {
  std::vector<Example> examples;
  std::vector<IdText> hypotheses;
  std::vector<SegmentTimeline> timelines;
  std::vector<std::string> noisy_ids;  // sorted
};

// n must be a multiple of clips_per_recording.
ToyCorpus make_toy_corpus(std::uint64_t seed = 7, std::size_t n = 200, double noise_fraction = 0.10,
                          std::size_t clips_per_recording = 20);

// Writes manifest.jsonl, hyps.jsonl, segments.jsonl and pipeline.json into
// `dir`.  The pipeline discards exactly the noisy fraction.
void write_toy_corpus(const ToyCorpus& corpus, const std::string& dir, double noise_fraction = 0.10);

}  // namespace s2tcurate
