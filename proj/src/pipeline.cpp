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

#include "s2tcurate/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <unordered_map>

#include "s2tcurate/error.hpp"
#include "s2tcurate/jsonl.hpp"
#include "s2tcurate/kernels.hpp"
#include "s2tcurate/manifest.hpp"
#include "s2tcurate/restore.hpp"

namespace s2tcurate {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

ojson rates_to_json(const std::string& subset, std::size_t n, const ErrorRates& r) {
  ojson j;
  j["subset"] = subset;
  j["num_examples"] = n;
  j["ref_len"] = r.counts.ref_len;
  j["hyp_len"] = r.counts.hyp_len;
  j["sub"] = r.counts.sub;
  j["ins"] = r.counts.ins;
  j["del"] = r.counts.del;
  j["total"] = r.total;
  j["sub_rate"] = r.sub_rate;
  j["ins_rate"] = r.ins_rate;
  j["del_rate"] = r.del_rate;
  j["degenerate"] = r.degenerate;
  return j;
}

struct RefRecord {
  std::string id;
  std::string text;
  std::string language;
  std::optional<bool> clean;
};

std::vector<RefRecord> load_references(const std::string& path, const std::string& default_language) {
  bool manifest = false;
  {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos) continue;
      if (line[p] == '{') {
        try {
          manifest = json::parse(line).contains("audio");
        } catch (const json::parse_error&) {
        }
      }
      break;
    }
  }
  std::vector<RefRecord> out;
  if (!manifest) {
    for (auto& r : read_id_text(path)) out.push_back({r.id, r.text, default_language, std::nullopt});
    return out;
  }
  std::set<std::string> seen;
  for_each_jsonl(path, [&](const json& j, std::size_t line) {
    Example e = example_from_json(j, path, line);
    if (!seen.insert(e.id).second) throw SchemaError(path, line, "id", "duplicate id '" + e.id + "'");
    std::optional<bool> clean;
    if (auto it = j.find("clean"); it != j.end() && it->is_boolean()) clean = it->get<bool>();
    out.push_back({e.id, e.y_tgt, e.language, clean});
  });
  return out;
}

std::vector<TextPair> make_pairs(const std::vector<RefRecord>& refs, const std::vector<IdText>& hyps,
                                 std::size_t& missing) {
  std::unordered_map<std::string, const std::string*> by_id;
  for (const auto& h : hyps) by_id.emplace(h.id, &h.text);
  std::vector<TextPair> pairs;
  pairs.reserve(refs.size());
  missing = 0;
  for (const auto& r : refs) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) ++missing;
    pairs.push_back({r.text, it == by_id.end() ? std::string() : *it->second, r.language});
  }
  return pairs;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ---------------------------------------------------------------------------

Summary stage_stats(const std::string& manifest, std::ostream& out, StatsFormat format) {
  ManifestReader reader(manifest);
  StatsAccumulator acc;
  std::size_t n = 0;
  while (auto e = reader.next()) {
    acc.add(*e);
    ++n;
  }
  const auto stats = acc.finish();
  if (format == StatsFormat::kJson) {
    out << stats_to_json(stats).dump(2) << '\n';
  } else {
    out << format_stats_table(stats);
  }
  Summary s;
  s["input_count"] = n;
  s["output_count"] = n;
  s["datasets"] = stats.size();
  s["stats"] = stats_to_json(stats);
  return s;
}

Summary stage_score(const ScoreOptions& opts) {
  const auto refs = load_references(opts.ref, opts.language);
  const auto hyps = read_id_text(opts.hyp);
  std::size_t missing = 0;
  const auto pairs = make_pairs(refs, hyps, missing);
  const NormalizationPolicy policy = policy_for(opts.metric);
  const auto counts = score_pairs_parallel(pairs, policy);

  std::optional<std::vector<EditCounts>> baseline;
  if (opts.baseline_hyp) {
    std::size_t unused = 0;
    baseline = score_pairs_parallel(make_pairs(refs, read_id_text(*opts.baseline_hyp), unused), policy);
  }

  std::optional<std::vector<std::vector<double>>> logprobs;
  if (opts.perplexity_endpoint) {
    LlmGate gate(make_backend(*opts.perplexity_endpoint), *opts.perplexity_endpoint);
    try {
      std::vector<std::vector<double>> lps(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!tokenize(pairs[i].hyp, Unit::kWord).empty()) lps[i] = gate.token_logprobs(pairs[i].hyp);
      }
      logprobs = std::move(lps);
    } catch (const FeatureUnavailable& e) {
      std::cerr << "warning: perplexity omitted: " << e.what() << '\n';
    }
  }

  if (opts.per_example_out) {
    OutputFile out(*opts.per_example_out);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const ErrorRates r = rates_from_counts(counts[i]);
      ojson j;
      j["id"] = refs[i].id;
      j["ref_len"] = counts[i].ref_len;
      j["hyp_len"] = counts[i].hyp_len;
      j["sub"] = counts[i].sub;
      j["ins"] = counts[i].ins;
      j["del"] = counts[i].del;
      j["errors"] = counts[i].distance();
      j["rate"] = r.total;
      j["degenerate"] = r.degenerate;
      if (logprobs && !(*logprobs)[i].empty()) j["perplexity"] = perplexity((*logprobs)[i]);
      out.write_line(j.dump());
    }
    out.commit();
  }

  Summary s;
  s["metric"] = std::string(metric_name(opts.metric));
  s["pooling"] = opts.pooling == Pooling::kPooled ? "pooled" : "averaged";
  s["input_count"] = refs.size();
  s["missing_hypotheses"] = missing;

  const bool has_clean = std::any_of(refs.begin(), refs.end(), [](const RefRecord& r) { return r.clean.has_value(); });
  std::vector<std::pair<std::string, std::vector<std::size_t>>> subsets;
  std::vector<std::size_t> all(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) all[i] = i;
  subsets.emplace_back("full", all);
  if (has_clean) {
    std::vector<std::size_t> clean;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (refs[i].clean.value_or(false)) clean.push_back(i);
    }
    subsets.emplace_back("clean", clean);
  }

  auto pick = [](const std::vector<EditCounts>& c, const std::vector<std::size_t>& idx) {
    std::vector<EditCounts> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(c[i]);
    return out;
  };

  ojson subset_rows = ojson::array();
  std::vector<SubsetComparison> comparisons;
  for (const auto& [name, idx] : subsets) {
    const ErrorRates r = pool_counts(pick(counts, idx), opts.pooling);
    subset_rows.push_back(rates_to_json(name, idx.size(), r));
    if (baseline) comparisons.push_back({name, pool_counts(pick(*baseline, idx), opts.pooling), r});
  }
  s["subsets"] = subset_rows;
  if (baseline) {
    ojson rows = ojson::array();
    for (const auto& row : deletion_report(comparisons)) rows.push_back(reduction_to_json(row));
    s["comparison"] = rows;
  }
  if (logprobs) {
    std::vector<std::vector<double>> nonempty;
    for (auto& lp : *logprobs) {
      if (!lp.empty()) nonempty.push_back(lp);
    }
    if (!nonempty.empty()) s["perplexity"] = pooled_perplexity(nonempty);
  }
  s["output_count"] = refs.size();
  return s;
}

Summary stage_filter(const FilterOptions& opts) {
  const auto examples = read_manifest(opts.manifest);
  const auto hyps = read_id_text(opts.hyp);
  const FilterResult result = filter_corpus(examples, hyps, opts.config);

  OutputFile kept(opts.out);
  write_manifest(kept.stream(), result.kept);
  OutputFile decisions(opts.decisions);
  for (const auto& d : result.decisions) {
    ojson j;
    j["id"] = d.example_id;
    j["dataset"] = d.dataset;
    j["cer"] = d.cer ? ojson(*d.cer) : ojson();
    j["rank"] = d.cer ? ojson(d.rank) : ojson();
    j["verdict"] = d.cer ? std::string(verdict_name(d.verdict)) : std::string("keep_unscored");
    j["k_percent"] = d.k_percent;
    decisions.write_line(j.dump());
  }

  std::map<std::string, std::vector<std::string>> kept_by_dataset;
  std::map<std::string, std::size_t> discarded_by_dataset;
  for (const auto& d : result.decisions) {
    if (d.verdict == Verdict::kKeep && d.cer) kept_by_dataset[d.dataset].push_back(d.example_id);
    if (d.verdict == Verdict::kDiscard) ++discarded_by_dataset[d.dataset];
  }

  std::optional<OutputFile> groups;
  if (opts.groups_out) {
    groups.emplace(*opts.groups_out);
    ojson j;
    j["group_size"] = opts.config.group_size;
    j["language_mean_cer"] = result.language_mean_cer;
    j["groups"] = result.language_groups;
    groups->stream() << j.dump(2) << '\n';
  }
  std::optional<OutputFile> proxy;
  if (opts.proxy_out) {
    proxy.emplace(*opts.proxy_out);
    for (const auto& [dataset, ids] : kept_by_dataset) {
      const double k = opts.config.k_for(dataset);
      ojson j;
      j["dataset"] = dataset;
      j["k_percent"] = k;
      j["target_size"] = proxy_target_size(opts.config.proxy_n, k);
      j["ids"] = proxy_sample(ids, k, opts.config.proxy_n, opts.config.seed);
      proxy->write_line(j.dump());
    }
  }

  kept.commit();
  decisions.commit();
  if (groups) groups->commit();
  if (proxy) proxy->commit();

  Summary s;
  s["input_count"] = examples.size();
  s["output_count"] = result.kept.size();
  s["discarded"] = result.discarded;
  s["unscored"] = result.unscored;
  s["discarded_by_dataset"] = discarded_by_dataset;
  if (result.kept.size() + result.discarded != examples.size()) {
    throw DataError("filter counts do not reconcile");
  }
  return s;
}

Summary stage_candidates(const CandidatesOptions& opts) {
  const auto examples = read_manifest(opts.manifest);
  PromptRegistry prompts;
  if (opts.prompts) prompts.load_file(*opts.prompts);
  LlmGate gate(make_backend(opts.endpoint), opts.endpoint,
               [](const std::string& msg) { std::cerr << msg << '\n'; });
  const auto candidates = generate_candidates(examples, prompts, gate);

  OutputFile out(opts.out);
  std::size_t failed = 0;
  for (const auto& c : candidates) {
    if (c.status != "ok") ++failed;
    out.write_line(serialize_candidate(c));
  }
  out.commit();

  Summary s;
  s["input_count"] = examples.size();
  s["output_count"] = candidates.size();
  s["ok"] = candidates.size() - failed;
  s["llm_failed"] = failed;
  return s;
}

Summary stage_restore(const RestoreOptions& opts) {
  if (!(opts.threshold >= 0.0)) throw ConfigError("threshold must be >= 0");
  auto examples = read_manifest(opts.manifest);
  const auto candidates = read_candidates(opts.candidates);
  std::unordered_map<std::string, const CandidateRecord*> by_id;
  for (const auto& c : candidates) by_id.emplace(c.id, &c);

  std::vector<RestoreJob> jobs(examples.size());
  std::size_t llm_failed = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    jobs[i].example = &examples[i];
    auto it = by_id.find(examples[i].id);
    if (it == by_id.end()) continue;
    if (it->second->status != "ok") {
      ++llm_failed;
      continue;
    }
    jobs[i].candidate = it->second->candidate_text;
    jobs[i].src_candidate = it->second->src_candidate_text;
  }
  auto restored = restore_batch_parallel(jobs, opts.threshold);

  std::vector<std::string> original_tgt;
  original_tgt.reserve(examples.size());
  std::vector<Example> updated;
  updated.reserve(examples.size());
  std::map<std::string, std::size_t> status_counts;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    original_tgt.push_back(examples[i].y_tgt);
    updated.push_back(restored[i].example);
    ++status_counts[std::string(restore_status_name(restored[i].outcome.status))];
  }
  const std::size_t rewritten = propagate_context(updated, original_tgt);

  OutputFile out(opts.out);
  write_manifest(out.stream(), updated);
  std::optional<OutputFile> audit;
  if (opts.audit) {
    audit.emplace(*opts.audit);
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const auto& o = restored[i].outcome;
      ojson j;
      j["id"] = examples[i].id;
      j["status"] = std::string(restore_status_name(o.status));
      j["residual_wer"] = o.residual_wer;
      j["original"] = o.original;
      j["candidate"] = o.candidate;
      j["applied"] = o.applied;
      ojson ds = ojson::array();
      for (const auto& d : o.decisions) {
        ojson dj;
        dj["class"] = std::string(edit_class_name(d.edit_class));
        dj["accepted"] = d.accepted;
        dj["ref"] = d.op.ref_token ? ojson(d.op.ref_token->surface) : ojson();
        dj["hyp"] = d.op.hyp_token ? ojson(d.op.hyp_token->surface) : ojson();
        ds.push_back(std::move(dj));
      }
      j["decisions"] = std::move(ds);
      audit->write_line(j.dump());
    }
  }
  out.commit();
  if (audit) audit->commit();

  Summary s;
  s["input_count"] = examples.size();
  s["output_count"] = updated.size();
  s["status"] = status_counts;
  s["llm_failed"] = llm_failed;
  s["context_rewritten"] = rewritten;
  return s;
}

Summary stage_splice(const SpliceOptions& opts) {
  if (!(opts.config.max_duration_sec > 0.0)) throw ConfigError("max duration must be > 0");
  const auto timelines = read_segments(opts.segments);
  const auto spliced = splice_all_parallel(timelines, opts.config);

  OutputFile out(opts.out);
  std::size_t total = 0, clean = 0, oversize = 0, clips = 0, written = 0;
  for (const auto& rec : spliced) {
    for (const auto& lf : rec) {
      ++total;
      clips += lf.clip_ids.size();
      if (lf.clean) ++clean;
      if (lf.oversize) ++oversize;
      if (opts.clean_only && !lf.clean) continue;
      out.write_line(longform_to_json(lf).dump());
      ++written;
    }
  }
  out.commit();

  std::size_t segments = 0;
  for (const auto& t : timelines) segments += t.segments.size();
  Summary s;
  s["recordings"] = timelines.size();
  s["input_count"] = segments;
  s["transcribed_clips"] = clips;
  s["long_form_examples"] = total;
  s["clean"] = clean;
  s["dirty"] = total - clean;
  s["oversize"] = oversize;
  s["output_count"] = written;
  return s;
}

// ---------------------------------------------------------------------------

namespace {

std::string resolve(const fs::path& base, const json& stage, const char* key) {
  auto it = stage.find(key);
  if (it == stage.end() || !it->is_string()) {
    throw ConfigError("stage '" + stage.value("name", std::string("?")) + "' needs a string '" + key + "'");
  }
  const fs::path p(it->get<std::string>());
  return (p.is_absolute() ? p : base / p).lexically_normal().string();
}

template <class T>
T get_or(const json& stage, const char* key, T fallback) {
  auto it = stage.find(key);
  if (it == stage.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("stage '" + stage.value("name", std::string("?")) + "': bad value for '" + key + "'");
  }
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) throw DataError(what + " '" + path + "' does not exist");
}

const std::set<std::string>& known_stages() {
  static const std::set<std::string> kStages{"stats", "score", "filter", "candidates", "restore", "splice"};
  return kStages;
}

}  // namespace

Summary run_pipeline(const std::string& config_path, const RunOverrides& overrides) {
  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open run config '" + config_path + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("run config '" + config_path + "': " + e.what());
  }
  if (!config.is_object() || !config.contains("stages") || !config["stages"].is_array()) {
    throw ConfigError("run config needs a 'stages' array");
  }
  const fs::path base = fs::absolute(config_path).parent_path();

  const std::uint64_t seed = overrides.seed ? *overrides.seed : config.value("seed", std::uint64_t{0});
  const int jobs = overrides.jobs ? *overrides.jobs : config.value("jobs", 0);
  const std::string out_dir =
      overrides.output_dir ? *overrides.output_dir
                           : (base / config.value("output_dir", std::string("out"))).lexically_normal().string();
  set_max_threads(jobs);

  // Validate the whole stage list before running anything.
  std::set<std::string> seen;
  for (const auto& stage : config["stages"]) {
    const std::string name = stage.is_object() ? stage.value("name", std::string()) : std::string();
    if (!known_stages().contains(name)) {
      throw ConfigError("unknown stage '" + name + "' (expected one of stats, score, filter, candidates, restore, splice)");
    }
    if (!seen.insert(name).second) throw ConfigError("stage '" + name + "' listed twice");
  }
  if (seen.contains("restore") && !seen.contains("candidates") && config["stages"].is_array()) {
    for (const auto& stage : config["stages"]) {
      if (stage.value("name", std::string()) == "restore" && !stage.contains("candidates")) {
        throw ConfigError("stage 'restore' needs 'candidates' when no candidates stage runs");
      }
    }
  }

  fs::create_directories(out_dir);
  const fs::path out(out_dir);

  Summary report;
  report["tool_version"] = std::string(kToolVersion);
  report["seed"] = seed;
  report["jobs"] = jobs;
  report["config"] = ojson::parse(config.dump());
  report["stages"] = ojson::array();

  std::string manifest;
  if (config.contains("manifest")) {
    manifest = resolve(base, config, "manifest");
    require_file(manifest, "manifest");
  }
  std::string candidates_path;

  auto write_report = [&](const std::string& status) {
    report["status"] = status;
    std::ofstream r(out / "run.json", std::ios::binary);
    r << report.dump(2) << '\n';
  };

  for (const auto& stage : config["stages"]) {
    const std::string name = stage["name"].get<std::string>();
    const auto t0 = std::chrono::steady_clock::now();
    Summary result;
    try {
      auto need_manifest = [&] {
        if (manifest.empty()) throw ConfigError("stage '" + name + "' needs a top-level 'manifest'");
      };
      if (name == "stats") {
        need_manifest();
        std::ofstream table(out / "stats.txt", std::ios::binary);
        result = stage_stats(manifest, table, StatsFormat::kTable);
        std::ofstream js(out / "stats.json", std::ios::binary);
        js << result["stats"].dump(2) << '\n';
      } else if (name == "score") {
        need_manifest();
        ScoreOptions o;
        o.ref = manifest;
        o.hyp = resolve(base, stage, "hyp");
        require_file(o.hyp, "hypothesis file");
        o.metric = parse_metric(get_or<std::string>(stage, "metric", "wer"));
        o.per_example_out = (out / "score_per_example.jsonl").string();
        result = stage_score(o);
      } else if (name == "filter") {
        need_manifest();
        FilterOptions o;
        o.manifest = manifest;
        o.hyp = resolve(base, stage, "hyp");
        require_file(o.hyp, "hypothesis file");
        o.config.k_percent = get_or<double>(stage, "k", 5.0);
        if (stage.contains("overrides")) {
          o.config.per_dataset_overrides = get_or<std::map<std::string, double>>(stage, "overrides", {});
        }
        o.config.group_size = get_or<std::size_t>(stage, "group_size", 5);
        o.config.proxy_n = get_or<std::size_t>(stage, "proxy_n", 50'000);
        o.config.seed = seed;
        o.config.metric = parse_metric(get_or<std::string>(stage, "metric", "cer"));
        const std::string basis = get_or<std::string>(stage, "basis", "count");
        if (basis != "count" && basis != "duration") throw ConfigError("basis must be 'count' or 'duration'");
        o.config.basis = basis == "count" ? DiscardBasis::kCount : DiscardBasis::kDuration;
        o.out = (out / "filtered.jsonl").string();
        o.decisions = (out / "filter_decisions.jsonl").string();
        o.groups_out = (out / "language_groups.json").string();
        o.proxy_out = (out / "proxy_sample.jsonl").string();
        result = stage_filter(o);
        manifest = o.out;
      } else if (name == "candidates") {
        need_manifest();
        CandidatesOptions o;
        o.manifest = manifest;
        o.endpoint.base_url = get_or<std::string>(stage, "endpoint", "mock");
        o.endpoint.model_name = get_or<std::string>(stage, "model", o.endpoint.model_name);
        o.endpoint.max_in_flight = get_or<std::size_t>(stage, "max_in_flight", o.endpoint.max_in_flight);
        o.endpoint.max_retries = get_or<std::size_t>(stage, "max_retries", o.endpoint.max_retries);
        o.endpoint.timeout_sec = get_or<double>(stage, "timeout_sec", o.endpoint.timeout_sec);
        if (const char* token = std::getenv("S2TCURATE_LLM_TOKEN")) o.endpoint.api_key = token;
        if (stage.contains("prompts")) o.prompts = resolve(base, stage, "prompts");
        o.out = (out / "candidates.jsonl").string();
        result = stage_candidates(o);
        candidates_path = o.out;
      } else if (name == "restore") {
        need_manifest();
        RestoreOptions o;
        o.manifest = manifest;
        o.candidates = stage.contains("candidates") ? resolve(base, stage, "candidates") : candidates_path;
        require_file(o.candidates, "candidate file");
        o.threshold = get_or<double>(stage, "threshold", kDefaultRejectThreshold);
        o.out = (out / "restored.jsonl").string();
        o.audit = (out / "restore_audit.jsonl").string();
        result = stage_restore(o);
        manifest = o.out;
      } else if (name == "splice") {
        SpliceOptions o;
        o.segments = resolve(base, stage, "segments");
        require_file(o.segments, "segment file");
        o.config.max_duration_sec = get_or<double>(stage, "max_dur", 30.0);
        o.config.gap_tolerance_sec = get_or<double>(stage, "gap_tolerance", 0.5);
        o.clean_only = get_or<bool>(stage, "clean_only", false);
        o.out = (out / "longform.jsonl").string();
        result = stage_splice(o);
      }
    } catch (const std::exception& e) {
      ojson failed;
      failed["name"] = name;
      failed["status"] = "failed";
      failed["error"] = e.what();
      failed["seconds"] = seconds_since(t0);
      report["stages"].push_back(failed);
      report["failed_stage"] = name;
      write_report("failed");
      throw;
    }
    ojson entry;
    entry["name"] = name;
    entry["status"] = "ok";
    entry["seconds"] = seconds_since(t0);
    entry["summary"] = result;
    report["stages"].push_back(entry);
  }
  if (!manifest.empty()) report["final_manifest"] = fs::path(manifest).lexically_relative(base).generic_string();
  write_report("ok");
  return report;
}

}  // namespace s2tcurate
