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

#include "s2tcurate/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "s2tcurate/error.hpp"

namespace s2tcurate {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* field, const std::string& path, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError(path, line, field, "missing required field");
  return *it;
}

std::string require_string(const json& j, const char* field, const std::string& path,
                           std::size_t line) {
  const json& v = require(j, field, path, line);
  if (!v.is_string()) throw SchemaError(path, line, field, "expected a string");
  return v.get<std::string>();
}

double require_number(const json& j, const char* field, const std::string& path,
                      std::size_t line) {
  const json& v = require(j, field, path, line);
  if (!v.is_number()) throw SchemaError(path, line, field, "expected a number");
  return v.get<double>();
}

}  // namespace

std::string_view task_name(Task t) { return t == Task::kAsr ? "asr" : "st"; }

void validate_example(const Example& e, const std::string& path, std::size_t line) {
  if (e.id.empty()) throw SchemaError(path, line, "id", "must be nonempty");
  if (!(e.duration_sec > 0.0) || !std::isfinite(e.duration_sec)) {
    throw SchemaError(path, line, "duration_sec", "must be a positive number");
  }
  if (e.audio.start_sec < 0.0) throw SchemaError(path, line, "audio.start_sec", "must be >= 0");
  if (!(e.audio.end_sec > e.audio.start_sec)) {
    throw SchemaError(path, line, "audio.end_sec", "must be greater than audio.start_sec");
  }
  if (e.task == Task::kAsr && e.target_language) {
    throw SchemaError(path, line, "target_language", "not allowed for asr examples");
  }
}

nlohmann::ordered_json example_to_json(const Example& e) {
  nlohmann::ordered_json j;
  j["schema_version"] = kManifestSchemaVersion;
  j["id"] = e.id;
  j["dataset"] = e.dataset;
  j["language"] = e.language;
  j["task"] = std::string(task_name(e.task));
  if (e.target_language) j["target_language"] = *e.target_language;
  j["audio"] = {{"recording_id", e.audio.recording_id},
                {"start_sec", e.audio.start_sec},
                {"end_sec", e.audio.end_sec}};
  j["y_src"] = e.y_src;
  j["y_tgt"] = e.y_tgt;
  j["y_prev"] = e.y_prev;
  j["duration_sec"] = e.duration_sec;
  return j;
}

Example example_from_json(const json& j, const std::string& path, std::size_t line) {
  if (!j.is_object()) throw SchemaError(path, line, "<record>", "expected a JSON object");
  if (auto it = j.find("schema_version"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() != kManifestSchemaVersion) {
      throw SchemaError(path, line, "schema_version",
                        "unsupported version (expected " + std::to_string(kManifestSchemaVersion) + ")");
    }
  }
  Example e;
  e.id = require_string(j, "id", path, line);
  e.dataset = require_string(j, "dataset", path, line);
  e.language = require_string(j, "language", path, line);
  const std::string task = require_string(j, "task", path, line);
  if (task == "asr") {
    e.task = Task::kAsr;
  } else if (task == "st") {
    e.task = Task::kSt;
  } else {
    throw SchemaError(path, line, "task", "expected 'asr' or 'st', got '" + task + "'");
  }
  if (auto it = j.find("target_language"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError(path, line, "target_language", "expected a string");
    e.target_language = it->get<std::string>();
  }
  const json& audio = require(j, "audio", path, line);
  if (!audio.is_object()) throw SchemaError(path, line, "audio", "expected an object");
  e.audio.recording_id = require_string(audio, "recording_id", path, line);
  e.audio.start_sec = require_number(audio, "start_sec", path, line);
  e.audio.end_sec = require_number(audio, "end_sec", path, line);
  e.y_src = require_string(j, "y_src", path, line);
  e.y_tgt = require_string(j, "y_tgt", path, line);
  if (auto it = j.find("y_prev"); it != j.end()) {
    if (!it->is_string()) throw SchemaError(path, line, "y_prev", "expected a string");
    e.y_prev = it->get<std::string>();
  }
  e.duration_sec = require_number(j, "duration_sec", path, line);
  validate_example(e, path, line);
  return e;
}

std::string serialize_example(const Example& e) { return example_to_json(e).dump(); }

// ---------------------------------------------------------------------------

ManifestReader::ManifestReader(const std::string& path, bool check_unique_ids)
    : path_(path), in_(path), check_unique_ids_(check_unique_ids) {
  if (!in_) throw DataError("cannot open manifest '" + path + "'");
}

std::optional<Example> ManifestReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& err) {
      throw ParseError(path_, line_, text, std::string("malformed JSON (") + err.what() + ")");
    }
    Example e = example_from_json(j, path_, line_);
    if (check_unique_ids_ && !seen_.insert(e.id).second) {
      throw SchemaError(path_, line_, "id", "duplicate id '" + e.id + "'");
    }
    return e;
  }
  return std::nullopt;
}

std::vector<Example> read_manifest(const std::string& path) {
  ManifestReader reader(path);
  std::vector<Example> out;
  while (auto e = reader.next()) out.push_back(std::move(*e));
  return out;
}

void write_manifest(std::ostream& out, const std::vector<Example>& examples) {
  for (const auto& e : examples) out << serialize_example(e) << '\n';
}

void write_manifest(const std::string& path, const std::vector<Example>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest '" + path + "'");
  write_manifest(out, examples);
  if (!out) throw DataError("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------

StatsAccumulator::StatsAccumulator(StatsConfig config) : config_(std::move(config)) {}

void StatsAccumulator::add_seconds(Partial& p, double s) {
  const double t = p.seconds + s;
  if (std::abs(p.seconds) >= std::abs(s)) {
    p.compensation += (p.seconds - t) + s;
  } else {
    p.compensation += (s - t) + p.seconds;
  }
  p.seconds = t;
}

void StatsAccumulator::add(const Example& e) {
  Partial& p = by_dataset_[e.dataset];
  add_seconds(p, e.duration_sec);
  ++p.examples;
  p.languages.insert(e.language);
  if (contains_punctuation(e.y_tgt)) ++p.punctuated;
  if (config_.conventions.is_caseless(e.language)) {
    ++p.caseless_examples;
  } else if (contains_uppercase(e.y_tgt)) {
    ++p.uppercase;
  }
  auto& spans = p.spans[e.audio.recording_id];
  if (spans.size() < 2) spans.emplace(e.audio.start_sec, e.audio.end_sec);
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  for (const auto& [name, o] : other.by_dataset_) {
    Partial& p = by_dataset_[name];
    add_seconds(p, o.seconds);
    add_seconds(p, o.compensation);
    p.examples += o.examples;
    p.punctuated += o.punctuated;
    p.uppercase += o.uppercase;
    p.caseless_examples += o.caseless_examples;
    p.languages.insert(o.languages.begin(), o.languages.end());
    for (const auto& [rec, spans] : o.spans) {
      auto& mine = p.spans[rec];
      for (const auto& s : spans) {
        if (mine.size() >= 2) break;
        mine.insert(s);
      }
    }
  }
}

namespace {

bool meets_threshold(std::size_t hits, std::size_t n, double fraction) {
  if (n == 0) return false;
  const double needed = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return hits >= std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, needed)));
}

}  // namespace

std::vector<CorpusStats> StatsAccumulator::finish() const {
  std::vector<CorpusStats> out;
  for (const auto& [name, p] : by_dataset_) {
    CorpusStats s;
    s.dataset = name;
    s.volume_hours = (p.seconds + p.compensation) / 3600.0;
    s.num_examples = p.examples;
    s.languages = p.languages;
    s.has_punctuation = meets_threshold(p.punctuated, p.examples, config_.feature_threshold);
    const std::size_t cased = p.examples - p.caseless_examples;
    if (cased > 0) s.has_case = meets_threshold(p.uppercase, cased, config_.feature_threshold);
    for (const auto& [rec, spans] : p.spans) {
      if (spans.size() >= 2) {
        s.has_longform = true;
        break;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CorpusStats> corpus_stats(const std::vector<Example>& examples,
                                      const StatsConfig& config) {
  StatsAccumulator acc(config);
  for (const auto& e : examples) acc.add(e);
  return acc.finish();
}

std::map<std::string, TextFeatures> detect_text_features(const std::vector<Example>& examples,
                                                         const StatsConfig& config) {
  std::map<std::string, TextFeatures> out;
  for (const auto& s : corpus_stats(examples, config)) {
    out[s.dataset] = {s.has_punctuation, s.has_case};
  }
  return out;
}

namespace {

std::string mark(bool b) { return b ? "yes" : "no"; }

std::string human_count(std::size_t n) {
  char buf[32];
  if (n >= 1'000'000) {
    std::snprintf(buf, sizeof buf, "%.1fM", static_cast<double>(n) / 1e6);
  } else if (n >= 1'000) {
    std::snprintf(buf, sizeof buf, "%.0fK", static_cast<double>(n) / 1e3);
  } else {
    std::snprintf(buf, sizeof buf, "%zu", n);
  }
  return buf;
}

std::string language_cell(const std::set<std::string>& langs) {
  if (langs.size() == 1) return *langs.begin();
  return std::to_string(langs.size());
}

}  // namespace

std::string format_stats_table(const std::vector<CorpusStats>& stats) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "dataset" << std::right << std::setw(12) << "volume_h"
     << std::setw(10) << "language" << std::setw(10) << "examples" << std::setw(7) << "punct"
     << std::setw(7) << "case" << std::setw(11) << "long_form" << '\n';
  for (const auto& s : stats) {
    os << std::left << std::setw(24) << s.dataset << std::right << std::setw(12) << std::fixed
       << std::setprecision(2) << s.volume_hours << std::setw(10) << language_cell(s.languages)
       << std::setw(10) << human_count(s.num_examples) << std::setw(7) << mark(s.has_punctuation)
       << std::setw(7) << (s.has_case ? mark(*s.has_case) : "-") << std::setw(11)
       << mark(s.has_longform) << '\n';
  }
  return os.str();
}

nlohmann::ordered_json stats_to_json(const std::vector<CorpusStats>& stats) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : stats) {
    nlohmann::ordered_json j;
    j["dataset"] = s.dataset;
    j["volume_hours"] = s.volume_hours;
    j["num_examples"] = s.num_examples;
    j["languages"] = s.languages;
    j["has_punctuation"] = s.has_punctuation;
    j["has_case"] = s.has_case ? nlohmann::ordered_json(*s.has_case) : nlohmann::ordered_json();
    j["has_longform"] = s.has_longform;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace s2tcurate
