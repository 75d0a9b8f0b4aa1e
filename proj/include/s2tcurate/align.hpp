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

// Levenshtein alignment with traceback, and the error-rate metrics built on
// top of it (CER, WER and their punctuation/case-sensitive variants).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2tcurate/textnorm.hpp"

namespace s2tcurate {

enum class EditKind { kMatch, kSub, kIns, kDel };

std::string_view edit_kind_name(EditKind k);

struct AlignOp {
  EditKind kind = EditKind::kMatch;
  std::optional<Token> ref_token;  // absent for kIns
  std::optional<Token> hyp_token;  // absent for kDel
};

// Count tuple.  Merging is associative and commutative, so corpus totals can
// be reduced in any order.
struct EditCounts {
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;
  std::size_t sub = 0;
  std::size_t ins = 0;
  std::size_t del = 0;

  std::size_t distance() const { return sub + ins + del; }
  EditCounts& operator+=(const EditCounts& o) {
    ref_len += o.ref_len;
    hyp_len += o.hyp_len;
    sub += o.sub;
    ins += o.ins;
    del += o.del;
    return *this;
  }
  bool operator==(const EditCounts&) const = default;
};

struct Alignment {
  std::vector<AlignOp> ops;
  std::size_t ref_len = 0;
  std::size_t distance = 0;

  EditCounts counts() const;
};

// Minimal unit-cost alignment.  Tokens match when their surfaces are equal.
// Traceback runs from the end and prefers match, then sub, then del, then ins.
Alignment align(std::span<const Token> ref, std::span<const Token> hyp);

// Distance only, two-row DP.
std::size_t edit_distance(std::span<const Token> ref, std::span<const Token> hyp);

struct ErrorRates {
  double total = 0.0;
  double sub_rate = 0.0;
  double ins_rate = 0.0;
  double del_rate = 0.0;
  EditCounts counts;
  // Empty reference with a nonempty hypothesis: rates use max(1, hyp_len).
  bool degenerate = false;
};

ErrorRates rates_from_counts(const EditCounts& c);

// Normalizes both texts under `policy`, tokenizes at policy.unit (or the
// language's default unit when unset) and counts edits.
EditCounts error_counts(std::string_view ref_text, std::string_view hyp_text,
                        std::string_view language, const NormalizationPolicy& policy,
                        const LanguageConventions& conv = LanguageConventions::defaults());

ErrorRates error_rate(std::string_view ref_text, std::string_view hyp_text,
                      std::string_view language, const NormalizationPolicy& policy,
                      const LanguageConventions& conv = LanguageConventions::defaults());

struct TextPair {
  std::string ref;
  std::string hyp;
  std::string language = "eng";
};

enum class Pooling {
  kPooled,    // sum(errors) / sum(ref_len)
  kAveraged,  // mean of per-example rates
};

ErrorRates corpus_error_rate(std::span<const TextPair> pairs, const NormalizationPolicy& policy,
                             Pooling pooling = Pooling::kPooled,
                             const LanguageConventions& conv = LanguageConventions::defaults());

// Pools already-computed per-example counts.
ErrorRates pool_counts(std::span<const EditCounts> per_example, Pooling pooling);

}  // namespace s2tcurate
