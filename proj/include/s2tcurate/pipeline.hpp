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

// Stage drivers shared by the individual subcommands and the declarative
// `run` pipeline.  Each driver reads and writes files and returns a JSON
// summary with the stage's counts.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "s2tcurate/align.hpp"
#include "s2tcurate/filter.hpp"
#include "s2tcurate/llmgate.hpp"
#include "s2tcurate/longform.hpp"
#include "s2tcurate/restore.hpp"

namespace s2tcurate {

inline constexpr std::string_view kToolVersion = "0.3.0";

using Summary = nlohmann::ordered_json;

enum class StatsFormat { kTable, kJson };

Summary stage_stats(const std::string& manifest, std::ostream& out, StatsFormat format);

struct ScoreOptions {
  std::string ref;  // manifest or id/text file
  std::string hyp;
  Metric metric = Metric::kWer;
  Pooling pooling = Pooling::kPooled;
  std::string language = "eng";  // for id/text references
  std::optional<std::string> per_example_out;
  std::optional<std::string> baseline_hyp;
  std::optional<EndpointConfig> perplexity_endpoint;
};

Summary stage_score(const ScoreOptions& opts);

struct FilterOptions {
  std::string manifest;
  std::string hyp;
  FilterConfig config;
  std::string out;
  std::string decisions;
  std::optional<std::string> groups_out;
  std::optional<std::string> proxy_out;
};

Summary stage_filter(const FilterOptions& opts);

struct CandidatesOptions {
  std::string manifest;
  EndpointConfig endpoint;
  std::optional<std::string> prompts;
  std::string out;
};

Summary stage_candidates(const CandidatesOptions& opts);

struct RestoreOptions {
  std::string manifest;
  std::string candidates;
  double threshold = kDefaultRejectThreshold;
  std::string out;
  std::optional<std::string> audit;
};

Summary stage_restore(const RestoreOptions& opts);

struct SpliceOptions {
  std::string segments;
  SpliceConfig config;
  bool clean_only = false;
  std::string out;
};

Summary stage_splice(const SpliceOptions& opts);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> output_dir;
};

// Runs the stage list in a JSON config file.  Writes run.json into the
// output directory (also on failure, with the failing stage marked) and
// returns it.  Rethrows the failing stage's error.
Summary run_pipeline(const std::string& config_path, const RunOverrides& overrides = {});

}  // namespace s2tcurate
