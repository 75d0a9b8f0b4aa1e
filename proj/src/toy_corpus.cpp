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

#include "s2tcurate/toy_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "random.hpp"
#include "s2tcurate/error.hpp"

namespace s2tcurate {
namespace {

constexpr const char* kWords[] = {
    "the",    "river",  "morning", "went",    "toward", "city",    "slowly",  "light",  "was",
    "across", "under",  "garden",  "people",  "spoke",  "about",   "winter",  "house",  "old",
    "friend", "turned", "face",    "without", "joy",    "years",   "of",      "happy", "road",
    "music",  "quiet",  "called",  "home",    "before", "evening", "stone",   "bridge", "small",
    "boat",   "water",  "and",     "i",       "we",     "never",   "again",   "through", "window",
};
constexpr std::size_t kVocab = sizeof(kWords) / sizeof(kWords[0]);

std::string sentence(std::mt19937_64& rng, std::size_t words) {
  std::string out;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) out += ' ';
    out += kWords[detail::bounded(rng, kVocab)];
  }
  return out;
}

// Times are kept in integer tenths of a second so the written values are exact decimals.
long tenths(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<long>(detail::bounded(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

double sec(long tenths) { return static_cast<double>(tenths) / 10.0; }

}  // namespace

ToyCorpus make_toy_corpus(std::uint64_t seed, std::size_t n, double noise_fraction,
                          std::size_t clips_per_recording) {
  if (clips_per_recording == 0 || n % clips_per_recording != 0) {
    throw ConfigError("toy corpus size must be a multiple of clips per recording");
  }
  std::mt19937_64 rng(seed);
  ToyCorpus c;

  // Choose the noisy examples up front: a partial shuffle of indices.
  const auto noisy_count = static_cast<std::size_t>(std::llround(static_cast<double>(n) * noise_fraction));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < noisy_count; ++i) {
    std::swap(idx[i], idx[i + detail::bounded(rng, n - i)]);
  }
  std::vector<bool> noisy(n, false);
  for (std::size_t i = 0; i < noisy_count; ++i) noisy[idx[i]] = true;

  const std::size_t recordings = n / clips_per_recording;
  for (std::size_t r = 0; r < recordings; ++r) {
    char rec[32];
    std::snprintf(rec, sizeof rec, "toyrec%02zu", r);
    SegmentTimeline timeline{rec, "toycorpus", "eng", {}};
    long t = tenths(rng, 0, 10);
    std::string prev;
    for (std::size_t k = 0; k < clips_per_recording; ++k) {
      const std::size_t i = r * clips_per_recording + k;
      Example e;
      char id[48];
      std::snprintf(id, sizeof id, "%s-%03zu", rec, k);
      e.id = id;
      e.dataset = "toycorpus";
      e.language = "eng";
      e.task = Task::kAsr;
      const long dur = tenths(rng, 20, 60);
      e.audio = {rec, sec(t), sec(t + dur)};
      e.duration_sec = sec(dur);
      e.y_tgt = sentence(rng, 6 + detail::bounded(rng, 7));
      e.y_src = e.y_tgt;
      e.y_prev = prev;
      prev = e.y_tgt;

      std::string hyp;
      if (noisy[i]) {
        // Label covers speech the seed model never heard: only the first
        // word survives.
        hyp = e.y_tgt.substr(0, e.y_tgt.find(' '));
        c.noisy_ids.push_back(e.id);
      } else {
        // At most one dropped character, so clean CER stays below any
        // noisy example's.
        hyp = e.y_tgt;
        if (detail::bounded(rng, 2) == 0) {
          const std::size_t at = detail::bounded(rng, hyp.size());
          if (hyp[at] != ' ') hyp.erase(at, 1);
        }
      }
      c.hypotheses.push_back({e.id, hyp});

      Segment seg{e.id, e.audio.start_sec, e.audio.end_sec, std::nullopt};
      if (!noisy[i]) seg.text = e.y_tgt;
      timeline.segments.push_back(std::move(seg));

      c.examples.push_back(std::move(e));
      t += dur + tenths(rng, 1, 3);
    }
    c.timelines.push_back(std::move(timeline));
  }
  std::sort(c.noisy_ids.begin(), c.noisy_ids.end());
  return c;
}

void write_toy_corpus(const ToyCorpus& corpus, const std::string& dir, double noise_fraction) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);

  write_manifest((base / "manifest.jsonl").string(), corpus.examples);

  std::ofstream hyps(base / "hyps.jsonl", std::ios::binary);
  for (const auto& h : corpus.hypotheses) {
    nlohmann::ordered_json j;
    j["id"] = h.id;
    j["text"] = h.text;
    hyps << j.dump() << '\n';
  }

  std::ofstream segs(base / "segments.jsonl", std::ios::binary);
  for (const auto& t : corpus.timelines) {
    for (const auto& s : t.segments) {
      nlohmann::ordered_json j;
      j["recording_id"] = t.recording_id;
      j["segment_id"] = s.segment_id;
      j["dataset"] = t.dataset;
      j["language"] = t.language;
      j["start_sec"] = s.start_sec;
      j["end_sec"] = s.end_sec;
      j["text"] = s.text ? nlohmann::ordered_json(*s.text) : nlohmann::ordered_json();
      segs << j.dump() << '\n';
    }
  }

  nlohmann::ordered_json cfg;
  cfg["manifest"] = "manifest.jsonl";
  cfg["output_dir"] = "out";
  cfg["seed"] = 13;
  cfg["jobs"] = 0;
  cfg["stages"] = nlohmann::ordered_json::array({
      {{"name", "stats"}},
      {{"name", "score"}, {"hyp", "hyps.jsonl"}, {"metric", "wer"}},
      {{"name", "filter"}, {"hyp", "hyps.jsonl"}, {"k", noise_fraction * 100.0}, {"proxy_n", 100}},
      {{"name", "candidates"}, {"endpoint", "mock"}},
      {{"name", "restore"}, {"threshold", 0.30}},
      {{"name", "splice"}, {"segments", "segments.jsonl"}, {"max_dur", 30.0}},
  });
  std::ofstream(base / "pipeline.json", std::ios::binary) << cfg.dump(2) << '\n';
}

}  // namespace s2tcurate
