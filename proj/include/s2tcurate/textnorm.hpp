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

// Text normalization and tokenization shared by scoring, filtering and
// restoration.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace s2tcurate {

enum class Unit { kWord, kChar };

struct NormalizationPolicy {
  bool fold_case = false;
  bool strip_punctuation = false;
  bool collapse_whitespace = false;
  // Unset means "pick per language" (see LanguageConventions::metric_unit_for).
  // kChar also drops whitespace from the normalized text.
  std::optional<Unit> unit;

  // Punctuation and case retained: the pc-WER / pc-CER convention.
  static NormalizationPolicy identity() { return {}; }
  // Case folded, punctuation stripped, whitespace collapsed.
  static NormalizationPolicy plain() { return {true, true, true, std::nullopt}; }

  bool operator==(const NormalizationPolicy&) const = default;
};

enum class Metric { kWer, kCer, kPcWer, kPcCer, kAuto };

// Accepts "wer", "cer", "pc-wer", "pc-cer", "auto". Throws ConfigError.
Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric m);
NormalizationPolicy policy_for(Metric m);

// Unicode P* plus any configured extras.  Apostrophes and hyphens with a
// letter on both sides are treated as word characters.
class PunctuationSet {
 public:
  static const PunctuationSet& standard();

  PunctuationSet() = default;
  explicit PunctuationSet(std::u32string extras) : extras_(std::move(extras)) {}

  bool is_punctuation(char32_t c) const;
  // Context-aware test: text[i] is punctuation and not an intra-word joiner.
  bool is_punctuation_at(std::u32string_view text, std::size_t i) const;

 private:
  std::u32string extras_;
};

struct Token {
  std::string surface;
  std::string core;
  std::string lead_punct;
  std::string trail_punct;

  // True when the token has no core (all punctuation).
  bool punctuation_only() const { return core.empty() && !surface.empty(); }
  bool operator==(const Token&) const = default;
};

std::string normalize(std::string_view text, const NormalizationPolicy& policy,
                      const PunctuationSet& punct = PunctuationSet::standard());

std::vector<Token> tokenize(std::string_view text, Unit unit,
                            const PunctuationSet& punct = PunctuationSet::standard());

// Splits one whitespace-free word into lead punctuation, core, trail
// punctuation.  An all-punctuation word is stored entirely in lead_punct.
Token make_token(std::string_view surface,
                 const PunctuationSet& punct = PunctuationSet::standard());

// Per-language scoring conventions.  Codes are ISO-639-3.
struct LanguageConventions {
  std::set<std::string> char_scored{"zho", "jpn", "kor", "tha"};
  std::set<std::string> caseless{"zho", "jpn", "kor", "tha"};

  static const LanguageConventions& defaults();

  Unit metric_unit_for(std::string_view language) const;
  bool is_caseless(std::string_view language) const;
};

inline Unit metric_unit_for(std::string_view language) {
  return LanguageConventions::defaults().metric_unit_for(language);
}

// UTF-8 helpers.  Ill-formed sequences decode to U+FFFD.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
void utf8_append(std::string& out, char32_t c);

bool is_whitespace(char32_t c);
bool is_letter(char32_t c);
bool is_uppercase(char32_t c);
bool is_cased(char32_t c);
char32_t fold_case(char32_t c);

bool contains_punctuation(std::string_view text,
                          const PunctuationSet& punct = PunctuationSet::standard());
bool contains_uppercase(std::string_view text);
bool contains_cased_letter(std::string_view text);

}  // namespace s2tcurate
