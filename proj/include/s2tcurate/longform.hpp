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

// Long-form splicing: pack consecutive transcribed clips of a recording into
// windows, flag windows that contain untranscribed speech, and keep the
// previous-context chain.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "s2tcurate/align.hpp"
#include "s2tcurate/manifest.hpp"

namespace s2tcurate {

struct Segment {
  std::string segment_id;
  double start_sec = 0.0;
  double end_sec = 0.0;
  std::optional<std::string> text;  // absent: known untranscribed clip
};

struct SegmentTimeline {
  std::string recording_id;
  std::string dataset;
  std::string language;
  std::vector<Segment> segments;
};

struct SpliceConfig {
  double max_duration_sec = 30.0;
  double gap_tolerance_sec = 0.5;
  double overlap_tolerance_sec = 0.01;
};

struct LongFormExample {
  Example example;
  std::vector<std::string> clip_ids;
  bool clean = true;
  bool oversize = false;
};

// Throws DataError if segments are unsorted, overlapping beyond the
// tolerance, or have end <= start.
void validate_timeline(const SegmentTimeline& timeline, double overlap_tolerance_sec);

// Greedy packing: a transcribed clip joins the current window while the
// window span stays within max_duration_sec.
std::vector<LongFormExample> splice(const SegmentTimeline& timeline, const SpliceConfig& config = {});

std::vector<LongFormExample> clean_subset(std::span<const LongFormExample> examples);

// Groups segments by recording (first-appearance order) and sorts each
// recording's segments by start time.
std::vector<SegmentTimeline> read_segments(const std::string& path);

nlohmann::ordered_json longform_to_json(const LongFormExample& e);

// For each example, the index of the next example of the same recording in
// (start, end, manifest position) order.
std::vector<std::optional<std::size_t>> chain_successors(const std::vector<Example>& examples);

// Relative change (new - old) / old.  Negative values are reductions.
// Unset when old is zero.
std::optional<double> relative_change(double old_value, double new_value);

struct ReductionRow {
  std::string subset;
  ErrorRates baseline;
  ErrorRates system;
  std::optional<double> total_change;
  std::optional<double> deletion_change;
};

struct SubsetComparison {
  std::string subset;
  ErrorRates baseline;
  ErrorRates system;
};

std::vector<ReductionRow> deletion_report(std::span<const SubsetComparison> comparisons);

nlohmann::ordered_json reduction_to_json(const ReductionRow& row);

}  // namespace s2tcurate
