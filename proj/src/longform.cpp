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

#include "s2tcurate/longform.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

#include "s2tcurate/error.hpp"
#include "s2tcurate/jsonl.hpp"

namespace s2tcurate {
namespace {

std::string window_id(const std::string& recording, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_lf%04zu", index);
  return recording + buf;
}

}  // namespace

void validate_timeline(const SegmentTimeline& t, double overlap_tolerance_sec) {
  for (std::size_t i = 0; i < t.segments.size(); ++i) {
    const Segment& s = t.segments[i];
    if (!(s.end_sec > s.start_sec) || s.start_sec < 0.0) {
      throw DataError("recording '" + t.recording_id + "': segment '" + s.segment_id +
                      "' has an empty or negative span");
    }
    if (i == 0) continue;
    const Segment& prev = t.segments[i - 1];
    if (s.start_sec < prev.start_sec) {
      throw DataError("recording '" + t.recording_id + "': segments not sorted at '" + s.segment_id + "'");
    }
    if (prev.end_sec > s.start_sec + overlap_tolerance_sec) {
      throw DataError("recording '" + t.recording_id + "': segment '" + prev.segment_id +
                      "' overlaps '" + s.segment_id + "'");
    }
  }
}

std::vector<LongFormExample> splice(const SegmentTimeline& timeline, const SpliceConfig& config) {
  validate_timeline(timeline, config.overlap_tolerance_sec);

  // Untranscribed spans with a running maximum of their end times: any span
  // starting before a window's end overlaps it iff that maximum exceeds the
  // window's start.
  std::vector<double> gap_starts;
  std::vector<double> gap_end_prefix_max;
  for (const auto& s : timeline.segments) {
    if (s.text) continue;
    gap_starts.push_back(s.start_sec);
    const double prior = gap_end_prefix_max.empty() ? s.end_sec : gap_end_prefix_max.back();
    gap_end_prefix_max.push_back(std::max(prior, s.end_sec));
  }
  auto overlaps_untranscribed = [&](double begin, double end) {
    const auto n = static_cast<std::size_t>(
        std::lower_bound(gap_starts.begin(), gap_starts.end(), end) - gap_starts.begin());
    return n > 0 && gap_end_prefix_max[n - 1] > begin;
  };

  std::vector<LongFormExample> out;
  std::vector<const Segment*> window;

  auto flush = [&] {
    if (window.empty()) return;
    LongFormExample lf;
    const double begin = window.front()->start_sec;
    const double end = window.back()->end_sec;
    std::string text;
    bool clean = true;
    for (std::size_t k = 0; k < window.size(); ++k) {
      const Segment* s = window[k];
      lf.clip_ids.push_back(s->segment_id);
      if (!s->text->empty()) {
        if (!text.empty()) text += ' ';
        text += *s->text;
      }
      if (k > 0 && s->start_sec - window[k - 1]->end_sec > config.gap_tolerance_sec) clean = false;
    }
    if (overlaps_untranscribed(begin, end)) clean = false;

    Example& e = lf.example;
    e.id = window_id(timeline.recording_id, out.size());
    e.dataset = timeline.dataset;
    e.language = timeline.language;
    e.task = Task::kAsr;
    e.audio = {timeline.recording_id, begin, end};
    e.y_src = text;
    e.y_tgt = text;
    e.y_prev = out.empty() ? std::string() : out.back().example.y_tgt;
    e.duration_sec = end - begin;
    lf.clean = clean;
    lf.oversize = window.size() == 1 && e.duration_sec > config.max_duration_sec;
    out.push_back(std::move(lf));
    window.clear();
  };

  for (const auto& s : timeline.segments) {
    if (!s.text) continue;
    if (!window.empty() && s.end_sec - window.front()->start_sec > config.max_duration_sec) flush();
    window.push_back(&s);
  }
  flush();
  return out;
}

std::vector<LongFormExample> clean_subset(std::span<const LongFormExample> examples) {
  std::vector<LongFormExample> out;
  for (const auto& e : examples) {
    if (e.clean) out.push_back(e);
  }
  return out;
}

std::vector<SegmentTimeline> read_segments(const std::string& path) {
  std::vector<SegmentTimeline> timelines;
  std::unordered_map<std::string, std::size_t> index;

  for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw SchemaError(path, line, "<record>", "expected a JSON object");
    auto str = [&](const char* key, bool required) -> std::string {
      auto it = j.find(key);
      if (it == j.end() || it->is_null()) {
        if (required) throw SchemaError(path, line, key, "missing required field");
        return {};
      }
      if (!it->is_string()) throw SchemaError(path, line, key, "expected a string");
      return it->get<std::string>();
    };
    auto num = [&](const char* key) {
      auto it = j.find(key);
      if (it == j.end()) throw SchemaError(path, line, key, "missing required field");
      if (!it->is_number()) throw SchemaError(path, line, key, "expected a number");
      return it->get<double>();
    };

    const std::string rec = str("recording_id", true);
    auto [it, inserted] = index.try_emplace(rec, timelines.size());
    if (inserted) {
      timelines.push_back({rec, str("dataset", false), str("language", false), {}});
      if (timelines.back().language.empty()) timelines.back().language = "eng";
    }
    Segment s;
    s.segment_id = str("segment_id", true);
    s.start_sec = num("start_sec");
    s.end_sec = num("end_sec");
    if (auto t = j.find("text"); t != j.end() && !t->is_null()) {
      if (!t->is_string()) throw SchemaError(path, line, "text", "expected a string or null");
      s.text = t->get<std::string>();
    }
    timelines[it->second].segments.push_back(std::move(s));
  });

  for (auto& t : timelines) {
    std::stable_sort(t.segments.begin(), t.segments.end(),
                     [](const Segment& a, const Segment& b) { return a.start_sec < b.start_sec; });
  }
  return timelines;
}

nlohmann::ordered_json longform_to_json(const LongFormExample& e) {
  nlohmann::ordered_json j = example_to_json(e.example);
  j["clip_ids"] = e.clip_ids;
  j["clean"] = e.clean;
  j["oversize"] = e.oversize;
  return j;
}

std::vector<std::optional<std::size_t>> chain_successors(const std::vector<Example>& examples) {
  std::map<std::string, std::vector<std::size_t>> by_recording;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    by_recording[examples[i].audio.recording_id].push_back(i);
  }
  std::vector<std::optional<std::size_t>> next(examples.size());
  for (auto& [rec, idx] : by_recording) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = examples[a].audio;
      const auto& y = examples[b].audio;
      if (x.start_sec != y.start_sec) return x.start_sec < y.start_sec;
      return x.end_sec < y.end_sec;
    });
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) next[idx[k]] = idx[k + 1];
  }
  return next;
}

std::optional<double> relative_change(double old_value, double new_value) {
  if (old_value == 0.0) return std::nullopt;
  return (new_value - old_value) / old_value;
}

std::vector<ReductionRow> deletion_report(std::span<const SubsetComparison> comparisons) {
  std::vector<ReductionRow> rows;
  rows.reserve(comparisons.size());
  for (const auto& c : comparisons) {
    rows.push_back({c.subset, c.baseline, c.system, relative_change(c.baseline.total, c.system.total),
                    relative_change(c.baseline.del_rate, c.system.del_rate)});
  }
  return rows;
}

nlohmann::ordered_json reduction_to_json(const ReductionRow& row) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
  };
  nlohmann::ordered_json j;
  j["subset"] = row.subset;
  j["baseline_total"] = row.baseline.total;
  j["baseline_del"] = row.baseline.del_rate;
  j["system_total"] = row.system.total;
  j["system_del"] = row.system.del_rate;
  j["total_relative_change"] = opt(row.total_change);
  j["deletion_relative_change"] = opt(row.deletion_change);
  return j;
}

}  // namespace s2tcurate
