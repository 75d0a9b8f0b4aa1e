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

#include "s2tcurate/align.hpp"

#include <algorithm>
#include <cstdint>

namespace s2tcurate {

std::string_view edit_kind_name(EditKind k) {
  switch (k) {
    case EditKind::kMatch: return "match";
    case EditKind::kSub: return "sub";
    case EditKind::kIns: return "ins";
    case EditKind::kDel: return "del";
  }
  return "?";
}

EditCounts Alignment::counts() const {
  EditCounts c;
  for (const auto& op : ops) {
    switch (op.kind) {
      case EditKind::kMatch: ++c.ref_len; ++c.hyp_len; break;
      case EditKind::kSub: ++c.ref_len; ++c.hyp_len; ++c.sub; break;
      case EditKind::kIns: ++c.hyp_len; ++c.ins; break;
      case EditKind::kDel: ++c.ref_len; ++c.del; break;
    }
  }
  return c;
}

Alignment align(std::span<const Token> ref, std::span<const Token> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<uint32_t> d((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> uint32_t& { return d[i * width + j]; };

  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = static_cast<uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const uint32_t diag = at(i - 1, j - 1) + (ref[i - 1].surface == hyp[j - 1].surface ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  Alignment a;
  a.ref_len = n;
  a.distance = at(n, m);
  a.ops.reserve(std::max(n, m));

  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const uint32_t here = at(i, j);
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1].surface == hyp[j - 1].surface;
      if (same && at(i - 1, j - 1) == here) {
        a.ops.push_back({EditKind::kMatch, ref[i - 1], hyp[j - 1]});
        --i; --j;
        continue;
      }
      if (!same && at(i - 1, j - 1) + 1 == here) {
        a.ops.push_back({EditKind::kSub, ref[i - 1], hyp[j - 1]});
        --i; --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + 1 == here) {
      a.ops.push_back({EditKind::kDel, ref[i - 1], std::nullopt});
      --i;
      continue;
    }
    a.ops.push_back({EditKind::kIns, std::nullopt, hyp[j - 1]});
    --j;
  }
  std::reverse(a.ops.begin(), a.ops.end());
  return a;
}

std::size_t edit_distance(std::span<const Token> ref, std::span<const Token> hyp) {
  std::vector<std::size_t> row(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t previous = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t old = row[j];
      row[j] = std::min(previous + (ref[i - 1].surface == hyp[j - 1].surface ? 0 : 1),
                        std::min(row[j - 1], row[j]) + 1);
      previous = old;
    }
  }
  return row[hyp.size()];
}

ErrorRates rates_from_counts(const EditCounts& c) {
  ErrorRates r;
  r.counts = c;
  if (c.ref_len == 0 && c.hyp_len == 0) return r;
  double denom = static_cast<double>(c.ref_len);
  if (c.ref_len == 0) {
    r.degenerate = true;
    denom = static_cast<double>(std::max<std::size_t>(1, c.hyp_len));
  }
  r.sub_rate = static_cast<double>(c.sub) / denom;
  r.ins_rate = static_cast<double>(c.ins) / denom;
  r.del_rate = static_cast<double>(c.del) / denom;
  r.total = static_cast<double>(c.distance()) / denom;
  return r;
}

EditCounts error_counts(std::string_view ref_text, std::string_view hyp_text,
                        std::string_view language, const NormalizationPolicy& policy,
                        const LanguageConventions& conv) {
  NormalizationPolicy p = policy;
  if (!p.unit) p.unit = conv.metric_unit_for(language);
  const auto ref = tokenize(normalize(ref_text, p), *p.unit);
  const auto hyp = tokenize(normalize(hyp_text, p), *p.unit);
  return align(ref, hyp).counts();
}

ErrorRates error_rate(std::string_view ref_text, std::string_view hyp_text,
                      std::string_view language, const NormalizationPolicy& policy,
                      const LanguageConventions& conv) {
  return rates_from_counts(error_counts(ref_text, hyp_text, language, policy, conv));
}

ErrorRates pool_counts(std::span<const EditCounts> per_example, Pooling pooling) {
  EditCounts total;
  for (const auto& c : per_example) total += c;
  ErrorRates pooled = rates_from_counts(total);
  if (pooling == Pooling::kPooled || per_example.empty()) return pooled;

  ErrorRates avg;
  avg.counts = total;
  for (const auto& c : per_example) {
    const ErrorRates r = rates_from_counts(c);
    avg.total += r.total;
    avg.sub_rate += r.sub_rate;
    avg.ins_rate += r.ins_rate;
    avg.del_rate += r.del_rate;
    avg.degenerate = avg.degenerate || r.degenerate;
  }
  const double n = static_cast<double>(per_example.size());
  avg.total /= n;
  avg.sub_rate /= n;
  avg.ins_rate /= n;
  avg.del_rate /= n;
  return avg;
}

ErrorRates corpus_error_rate(std::span<const TextPair> pairs, const NormalizationPolicy& policy,
                             Pooling pooling, const LanguageConventions& conv) {
  std::vector<EditCounts> counts;
  counts.reserve(pairs.size());
  for (const auto& p : pairs) counts.push_back(error_counts(p.ref, p.hyp, p.language, policy, conv));
  return pool_counts(counts, pooling);
}

}  // namespace s2tcurate
