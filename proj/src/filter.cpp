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

#include "s2tcurate/filter.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "s2tcurate/error.hpp"
#include "s2tcurate/kernels.hpp"
#include "random.hpp"

namespace s2tcurate {

std::map<std::string, double> default_k_overrides() {
  return {{"librispeech", 15.0}, {"gigaspeech", 35.0}, {"wenetspeech", 45.0}, {"gigast", 35.0}};
}

std::string dataset_key(std::string_view dataset) {
  std::string key;
  for (unsigned char c : dataset) {
    if (std::isalnum(c)) key.push_back(static_cast<char>(std::tolower(c)));
  }
  return key;
}

namespace {

void check_k(double k) {
  if (!(k >= 0.0 && k <= 100.0)) {
    throw ConfigError("k_percent must be within [0, 100], got " + std::to_string(k));
  }
}

}  // namespace

void FilterConfig::validate() const {
  check_k(k_percent);
  for (const auto& [name, k] : per_dataset_overrides) {
    if (!(k >= 0.0 && k <= 100.0)) {
      throw ConfigError("k override for '" + name + "' must be within [0, 100]");
    }
  }
  if (group_size == 0) throw ConfigError("group_size must be >= 1");
  if (proxy_n == 0) throw ConfigError("proxy N must be >= 1");
}

double FilterConfig::k_for(std::string_view dataset) const {
  const std::string key = dataset_key(dataset);
  for (const auto& [name, k] : per_dataset_overrides) {
    if (dataset_key(name) == key) return k;
  }
  return k_percent;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::kKeep ? "keep" : "discard"; }

std::size_t discard_count(std::size_t n, double k_percent) {
  check_k(k_percent);
  const double integral = std::round(k_percent);
  if (integral == k_percent) {
    return n * static_cast<std::size_t>(integral) / 100;
  }
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * k_percent / 100.0));
}

std::vector<FilterDecision> rank_and_discard(std::span<const ScoredExample> scored, double k_percent,
                                             DiscardBasis basis) {
  check_k(k_percent);
  for (const auto& s : scored) {
    if (!(s.cer >= 0.0)) throw ConfigError("negative or NaN cer for '" + s.id + "'");
  }

  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].cer != scored[b].cer) return scored[a].cer > scored[b].cer;
    return scored[a].id < scored[b].id;
  });

  std::size_t to_discard = 0;
  if (basis == DiscardBasis::kCount) {
    to_discard = discard_count(scored.size(), k_percent);
  } else {
    double total = 0.0;
    for (const auto& s : scored) total += s.duration_sec;
    const double budget = total * k_percent / 100.0;
    double used = 0.0;
    for (std::size_t idx : order) {
      if (used + scored[idx].duration_sec > budget) break;
      used += scored[idx].duration_sec;
      ++to_discard;
    }
  }

  std::vector<FilterDecision> out(scored.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const ScoredExample& s = scored[order[r]];
    out[order[r]] = {s.id, s.cer, r + 1, r < to_discard ? Verdict::kDiscard : Verdict::kKeep};
  }
  return out;
}

std::vector<std::vector<std::string>> group_languages(
    const std::map<std::string, double>& per_language_mean_cer, std::size_t group_size) {
  if (group_size == 0) throw ConfigError("group_size must be >= 1");
  std::vector<std::pair<std::string, double>> langs(per_language_mean_cer.begin(),
                                                    per_language_mean_cer.end());
  std::stable_sort(langs.begin(), langs.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::vector<std::string>> groups;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    if (i % group_size == 0) groups.emplace_back();
    groups.back().push_back(langs[i].first);
  }
  return groups;
}

std::size_t proxy_target_size(std::size_t n, double k_percent) {
  check_k(k_percent);
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - k_percent / 100.0)));
}

std::vector<std::string> proxy_sample(std::span<const std::string> kept, double k_percent,
                                      std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("proxy N must be >= 1");
  std::vector<std::string> pool(kept.begin(), kept.end());
  std::sort(pool.begin(), pool.end());
  const std::size_t size = std::min(proxy_target_size(n, k_percent), pool.size());

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(detail::bounded(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

FilterResult filter_corpus(const std::vector<Example>& examples, const std::vector<IdText>& hyps,
                           const FilterConfig& config) {
  config.validate();
  std::unordered_map<std::string, const std::string*> hyp_by_id;
  for (const auto& h : hyps) hyp_by_id.emplace(h.id, &h.text);

  std::vector<TextPair> pairs;
  std::vector<std::size_t> pair_owner;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto it = hyp_by_id.find(examples[i].id);
    if (it == hyp_by_id.end()) continue;
    pairs.push_back({examples[i].y_src, *it->second, examples[i].language});
    pair_owner.push_back(i);
  }
  const auto counts = score_pairs_parallel(pairs, policy_for(config.metric));

  FilterResult result;
  result.decisions.resize(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    result.decisions[i].example_id = examples[i].id;
    result.decisions[i].dataset = examples[i].dataset;
    result.decisions[i].k_percent = config.k_for(examples[i].dataset);
  }

  // dataset -> indices into pairs
  std::map<std::string, std::vector<std::size_t>> partitions;
  std::map<std::string, std::pair<double, std::size_t>> lang_sum;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const Example& e = examples[pair_owner[p]];
    const double cer = rates_from_counts(counts[p]).total;
    result.decisions[pair_owner[p]].cer = cer;
    partitions[e.dataset].push_back(p);
    auto& [sum, n] = lang_sum[e.language];
    sum += cer;
    ++n;
  }

  for (const auto& [dataset, members] : partitions) {
    std::vector<ScoredExample> scored;
    scored.reserve(members.size());
    for (std::size_t p : members) {
      const Example& e = examples[pair_owner[p]];
      scored.push_back({e.id, *result.decisions[pair_owner[p]].cer, e.duration_sec});
    }
    const auto decisions = rank_and_discard(scored, config.k_for(dataset), config.basis);
    for (std::size_t m = 0; m < members.size(); ++m) {
      auto& d = result.decisions[pair_owner[members[m]]];
      d.rank = decisions[m].rank;
      d.verdict = decisions[m].verdict;
    }
  }

  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& d = result.decisions[i];
    if (!d.cer) ++result.unscored;
    if (d.verdict == Verdict::kDiscard) {
      ++result.discarded;
    } else {
      result.kept.push_back(examples[i]);
    }
  }
  for (const auto& [lang, sn] : lang_sum) {
    result.language_mean_cer[lang] = sn.first / static_cast<double>(sn.second);
  }
  result.language_groups = group_languages(result.language_mean_cer, config.group_size);
  return result;
}

}  // namespace s2tcurate
