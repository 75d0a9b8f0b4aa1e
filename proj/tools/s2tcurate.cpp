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

// Command-line entry point: stats, score, filter, candidates, restore,
// splice and run.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "s2tcurate/error.hpp"
#include "s2tcurate/kernels.hpp"
#include "s2tcurate/pipeline.hpp"

using namespace s2tcurate;

namespace {

std::map<std::string, double> parse_overrides(const std::vector<std::string>& specs) {
  std::map<std::string, double> out = default_k_overrides();
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--k-override expects dataset=k, got '" + spec + "'");
    try {
      out[dataset_key(spec.substr(0, eq))] = std::stod(spec.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--k-override expects a number after '=', got '" + spec + "'");
    }
  }
  return out;
}

void print_summary(const Summary& s) { std::cerr << s.dump(2) << '\n'; }

EndpointConfig endpoint_from_env(EndpointConfig c) {
  if (const char* url = std::getenv("S2TCURATE_LLM_ENDPOINT")) c.base_url = url;
  if (const char* model = std::getenv("S2TCURATE_LLM_MODEL")) c.model_name = model;
  if (const char* token = std::getenv("S2TCURATE_LLM_TOKEN")) c.api_key = token;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech corpus curation: CER filtering, punctuation/case restoration, long-form splicing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));
  int jobs = 0;
  app.add_option("--jobs,-j", jobs, "Worker thread cap (0 = all cores)");

  // stats
  auto* stats = app.add_subcommand("stats", "Per-dataset volume, languages and text features");
  std::string stats_manifest;
  std::string stats_format = "table";
  stats->add_option("--manifest", stats_manifest)->required();
  stats->add_option("--format", stats_format)->check(CLI::IsMember({"table", "json"}));

  // score
  auto* score = app.add_subcommand("score", "CER/WER with sub/ins/del decomposition");
  ScoreOptions score_opts;
  std::string score_metric = "wer";
  std::string per_example, baseline, ppl_endpoint;
  bool averaged = false;
  score->add_option("--ref", score_opts.ref, "Manifest or '<id> <text>' file")->required();
  score->add_option("--hyp", score_opts.hyp)->required();
  score->add_option("--metric", score_metric)->check(CLI::IsMember({"wer", "cer", "pc-wer", "pc-cer", "auto"}));
  score->add_option("--language", score_opts.language, "Language for id/text references");
  score->add_option("--per-example", per_example);
  score->add_option("--baseline", baseline, "Baseline hypotheses for relative-change report");
  score->add_flag("--average", averaged, "Mean of per-example rates instead of pooled");
  score->add_option("--ppl-endpoint", ppl_endpoint, "LLM endpoint (or 'mock') for perplexity");

  // filter
  auto* filter = app.add_subcommand("filter", "Discard the top-k% examples by CER");
  FilterOptions filter_opts;
  std::vector<std::string> k_overrides;
  std::string basis = "count", filter_metric = "cer";
  std::string groups_out, proxy_out;
  bool no_default_overrides = false;
  filter->add_option("--manifest", filter_opts.manifest)->required();
  filter->add_option("--hyp", filter_opts.hyp)->required();
  filter->add_option("--k", filter_opts.config.k_percent, "Default discard percentage");
  filter->add_option("--k-override", k_overrides, "dataset=k (repeatable)");
  filter->add_flag("--no-default-overrides", no_default_overrides);
  filter->add_option("--basis", basis)->check(CLI::IsMember({"count", "duration"}));
  filter->add_option("--metric", filter_metric)->check(CLI::IsMember({"wer", "cer", "pc-wer", "pc-cer", "auto"}));
  filter->add_option("--out", filter_opts.out)->required();
  filter->add_option("--decisions", filter_opts.decisions)->required();
  filter->add_option("--group-size", filter_opts.config.group_size);
  filter->add_option("--groups", groups_out, "Write language groups by mean CER");
  filter->add_option("--proxy-n", filter_opts.config.proxy_n);
  filter->add_option("--proxy-sample", proxy_out, "Write proxy-task samples per dataset");
  filter->add_option("--seed", filter_opts.config.seed);

  // candidates
  auto* cands = app.add_subcommand("candidates", "Request LLM restoration candidates");
  CandidatesOptions cand_opts;
  cand_opts.endpoint = endpoint_from_env(cand_opts.endpoint);
  std::string prompts;
  double timeout = cand_opts.endpoint.timeout_sec;
  cands->add_option("--manifest", cand_opts.manifest)->required();
  cands->add_option("--endpoint", cand_opts.endpoint.base_url, "Base URL (e.g. http://host:8000/v1) or 'mock'");
  cands->add_option("--model", cand_opts.endpoint.model_name);
  cands->add_option("--prompts", prompts, "JSON file of per-language prompt templates");
  cands->add_option("--max-in-flight", cand_opts.endpoint.max_in_flight);
  cands->add_option("--max-retries", cand_opts.endpoint.max_retries);
  cands->add_option("--timeout", timeout, "Seconds per request");
  cands->add_option("--out", cand_opts.out)->required();

  // restore
  auto* restore = app.add_subcommand("restore", "Apply constrained punctuation/case edits");
  RestoreOptions restore_opts;
  std::string audit;
  restore->add_option("--manifest", restore_opts.manifest)->required();
  restore->add_option("--candidates", restore_opts.candidates)->required();
  restore->add_option("--threshold", restore_opts.threshold, "Residual WER above which a candidate is rejected");
  restore->add_option("--out", restore_opts.out)->required();
  restore->add_option("--audit", audit);

  // splice
  auto* splice_cmd = app.add_subcommand("splice", "Splice clips into long-form examples");
  SpliceOptions splice_opts;
  splice_cmd->add_option("--segments", splice_opts.segments)->required();
  splice_cmd->add_option("--max-dur", splice_opts.config.max_duration_sec);
  splice_cmd->add_option("--gap-tolerance", splice_opts.config.gap_tolerance_sec);
  splice_cmd->add_option("--out", splice_opts.out)->required();
  splice_cmd->add_flag("--clean-only", splice_opts.clean_only);

  // run
  auto* run = app.add_subcommand("run", "Run a declarative stage list");
  std::string run_config;
  RunOverrides run_overrides;
  std::uint64_t run_seed = 0;
  std::string run_out;
  auto* seed_opt = run->add_option("--seed", run_seed);
  run->add_option("--config", run_config)->required();
  run->add_option("--out-dir", run_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    set_max_threads(jobs);
    if (stats->parsed()) {
      stage_stats(stats_manifest, std::cout, stats_format == "json" ? StatsFormat::kJson : StatsFormat::kTable);
    } else if (score->parsed()) {
      score_opts.metric = parse_metric(score_metric);
      score_opts.pooling = averaged ? Pooling::kAveraged : Pooling::kPooled;
      if (!per_example.empty()) score_opts.per_example_out = per_example;
      if (!baseline.empty()) score_opts.baseline_hyp = baseline;
      if (!ppl_endpoint.empty()) {
        EndpointConfig ep = endpoint_from_env({});
        ep.base_url = ppl_endpoint;
        score_opts.perplexity_endpoint = ep;
      }
      std::cout << stage_score(score_opts).dump(2) << '\n';
    } else if (filter->parsed()) {
      if (no_default_overrides) {
        filter_opts.config.per_dataset_overrides.clear();
        for (const auto& [k, v] : parse_overrides(k_overrides)) {
          bool from_flag = false;
          for (const auto& spec : k_overrides) from_flag |= dataset_key(spec.substr(0, spec.find('='))) == k;
          if (from_flag) filter_opts.config.per_dataset_overrides[k] = v;
        }
      } else {
        filter_opts.config.per_dataset_overrides = parse_overrides(k_overrides);
      }
      filter_opts.config.basis = basis == "count" ? DiscardBasis::kCount : DiscardBasis::kDuration;
      filter_opts.config.metric = parse_metric(filter_metric);
      if (!groups_out.empty()) filter_opts.groups_out = groups_out;
      if (!proxy_out.empty()) filter_opts.proxy_out = proxy_out;
      print_summary(stage_filter(filter_opts));
    } else if (cands->parsed()) {
      cand_opts.endpoint.timeout_sec = timeout;
      if (!prompts.empty()) cand_opts.prompts = prompts;
      const Summary s = stage_candidates(cand_opts);
      print_summary(s);
      if (s["input_count"].get<std::size_t>() > 0 && s["ok"].get<std::size_t>() == 0 &&
          s["llm_failed"].get<std::size_t>() > 0) {
        std::cerr << "error: every LLM request failed\n";
        return static_cast<int>(ExitCode::kEndpoint);
      }
    } else if (restore->parsed()) {
      if (!audit.empty()) restore_opts.audit = audit;
      print_summary(stage_restore(restore_opts));
    } else if (splice_cmd->parsed()) {
      print_summary(stage_splice(splice_opts));
    } else if (run->parsed()) {
      if (*seed_opt) run_overrides.seed = run_seed;
      if (app.get_option("--jobs")->count() > 0) run_overrides.jobs = jobs;
      if (!run_out.empty()) run_overrides.output_dir = run_out;
      const Summary report = run_pipeline(run_config, run_overrides);
      std::cerr << "run finished: " << report["stages"].size() << " stage(s)\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
  return 0;
}
