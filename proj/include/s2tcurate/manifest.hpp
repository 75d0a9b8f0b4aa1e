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

// Example data model, the line-delimited JSON manifest format and corpus
// statistics.

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "s2tcurate/textnorm.hpp"

namespace s2tcurate {

inline constexpr int kManifestSchemaVersion = 1;

enum class Task { kAsr, kSt };

std::string_view task_name(Task t);

struct AudioRef {
  std::string recording_id;
  double start_sec = 0.0;
  double end_sec = 0.0;

  bool operator==(const AudioRef&) const = default;
};

struct Example {
  std::string id;
  std::string dataset;
  std::string language;
  Task task = Task::kAsr;
  std::optional<std::string> target_language;  // st only
  AudioRef audio;
  std::string y_src;
  std::string y_tgt;
  std::string y_prev;
  double duration_sec = 0.0;

  bool operator==(const Example&) const = default;
};

// Throws SchemaError (with line/field) if an invariant is broken.
void validate_example(const Example& e, const std::string& path = "<memory>",
                      std::size_t line = 0);

// Canonical form: fixed key order, target_language only for st.
nlohmann::ordered_json example_to_json(const Example& e);
Example example_from_json(const nlohmann::json& j, const std::string& path = "<memory>",
                          std::size_t line = 0);
std::string serialize_example(const Example& e);

// Streaming reader: one example per line, blank lines skipped.  Duplicate ids
// are rejected unless check_unique_ids is false.
class ManifestReader {
 public:
  explicit ManifestReader(const std::string& path, bool check_unique_ids = true);

  std::optional<Example> next();
  std::size_t line_number() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
  bool check_unique_ids_;
  std::unordered_set<std::string> seen_;
};

std::vector<Example> read_manifest(const std::string& path);
void write_manifest(std::ostream& out, const std::vector<Example>& examples);
void write_manifest(const std::string& path, const std::vector<Example>& examples);

// Per-dataset statistics mirroring a corpus summary table.
struct CorpusStats {
  std::string dataset;
  double volume_hours = 0.0;
  std::size_t num_examples = 0;
  std::set<std::string> languages;
  bool has_punctuation = false;
  std::optional<bool> has_case;  // nullopt: language has no case distinction
  bool has_longform = false;
};

struct TextFeatures {
  bool has_punctuation = false;
  std::optional<bool> has_case;
};

struct StatsConfig {
  double feature_threshold = 0.01;  // fraction of examples, minimum one
  LanguageConventions conventions = LanguageConventions::defaults();
};

// Mergeable accumulator; merge() is associative and commutative, so shards
// of a manifest can be reduced independently.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(StatsConfig config = {});

  void add(const Example& e);
  void merge(const StatsAccumulator& other);
  std::vector<CorpusStats> finish() const;

 private:
  struct Partial {
    double seconds = 0.0;
    double compensation = 0.0;  // Neumaier running error
    std::size_t examples = 0;
    std::size_t punctuated = 0;
    std::size_t uppercase = 0;
    std::size_t caseless_examples = 0;
    std::set<std::string> languages;
    // recording -> distinct (start,end) spans, capped at two
    std::map<std::string, std::set<std::pair<double, double>>> spans;
  };
  static void add_seconds(Partial& p, double s);

  StatsConfig config_;
  std::map<std::string, Partial> by_dataset_;
};

std::vector<CorpusStats> corpus_stats(const std::vector<Example>& examples,
                                      const StatsConfig& config = {});
std::map<std::string, TextFeatures> detect_text_features(const std::vector<Example>& examples,
                                                         const StatsConfig& config = {});

std::string format_stats_table(const std::vector<CorpusStats>& stats);
nlohmann::ordered_json stats_to_json(const std::vector<CorpusStats>& stats);

}  // namespace s2tcurate
