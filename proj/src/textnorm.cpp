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

#include "s2tcurate/textnorm.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

#include "s2tcurate/error.hpp"

namespace s2tcurate {
namespace {

bool is_joiner(char32_t c) {
  switch (c) {
    case U'\'':
    case U'’':  // right single quotation mark
    case U'ʼ':  // modifier letter apostrophe
    case U'-':
    case U'‐':  // hyphen
    case U'‑':  // non-breaking hyphen
      return true;
    default:
      return false;
  }
}

}  // namespace

std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

void utf8_append(std::string& out, char32_t c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (error) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) utf8_append(out, c);
  return out;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }
bool is_uppercase(char32_t c) {
  const auto t = u_charType(static_cast<UChar32>(c));
  return t == U_UPPERCASE_LETTER || t == U_TITLECASE_LETTER;
}
bool is_cased(char32_t c) { return u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_CASED); }

namespace {

// Full case folding (ß -> ss), which can change the string length.
std::u32string fold_full(const std::u32string& s) {
  auto u = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                         static_cast<int32_t>(s.size()));
  u.foldCase(U_FOLD_CASE_DEFAULT);
  std::u32string out(static_cast<std::size_t>(u.countChar32()), U'\0');
  UErrorCode status = U_ZERO_ERROR;
  u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
  return out;
}

}  // namespace

char32_t fold_case(char32_t c) {
  return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
}

// ---------------------------------------------------------------------------

const PunctuationSet& PunctuationSet::standard() {
  static const PunctuationSet kStandard;
  return kStandard;
}

bool PunctuationSet::is_punctuation(char32_t c) const {
  if (u_ispunct(static_cast<UChar32>(c))) return true;
  return extras_.find(c) != std::u32string::npos;
}

bool PunctuationSet::is_punctuation_at(std::u32string_view text, std::size_t i) const {
  const char32_t c = text[i];
  if (!is_punctuation(c)) return false;
  if (is_joiner(c) && i > 0 && i + 1 < text.size() && is_letter(text[i - 1]) &&
      is_letter(text[i + 1])) {
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Metric parse_metric(std::string_view name) {
  if (name == "wer") return Metric::kWer;
  if (name == "cer") return Metric::kCer;
  if (name == "pc-wer") return Metric::kPcWer;
  if (name == "pc-cer") return Metric::kPcCer;
  if (name == "auto") return Metric::kAuto;
  throw ConfigError("unknown metric '" + std::string(name) +
                    "' (expected wer, cer, pc-wer, pc-cer or auto)");
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kWer: return "wer";
    case Metric::kCer: return "cer";
    case Metric::kPcWer: return "pc-wer";
    case Metric::kPcCer: return "pc-cer";
    case Metric::kAuto: return "auto";
  }
  return "?";
}

NormalizationPolicy policy_for(Metric m) {
  NormalizationPolicy p;
  switch (m) {
    case Metric::kWer: p = NormalizationPolicy::plain(); p.unit = Unit::kWord; break;
    case Metric::kCer: p = NormalizationPolicy::plain(); p.unit = Unit::kChar; break;
    case Metric::kPcWer: p.unit = Unit::kWord; break;
    case Metric::kPcCer: p.unit = Unit::kChar; break;
    case Metric::kAuto: p = NormalizationPolicy::plain(); break;
  }
  return p;
}

std::string normalize(std::string_view text, const NormalizationPolicy& policy,
                      const PunctuationSet& punct) {
  std::u32string s = utf8_decode(text);

  if (policy.fold_case) s = fold_full(s);

  if (policy.strip_punctuation) {
    std::u32string kept;
    kept.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!punct.is_punctuation_at(s, i)) kept.push_back(s[i]);
    }
    s = std::move(kept);
  }

  if (policy.unit == Unit::kChar) {
    std::erase_if(s, is_whitespace);
  } else if (policy.collapse_whitespace) {
    std::u32string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char32_t c : s) {
      if (is_whitespace(c)) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(U' ');
      pending_space = false;
      out.push_back(c);
    }
    s = std::move(out);
  }
  return utf8_encode(s);
}

Token make_token(std::string_view surface, const PunctuationSet& punct) {
  const std::u32string s = utf8_decode(surface);
  std::size_t lead = 0;
  while (lead < s.size() && punct.is_punctuation_at(s, lead)) ++lead;
  std::size_t trail_begin = s.size();
  if (lead < s.size()) {
    while (trail_begin > lead && punct.is_punctuation_at(s, trail_begin - 1)) --trail_begin;
  }
  const std::u32string_view v(s);
  Token t;
  t.surface = std::string(surface);
  t.lead_punct = utf8_encode(v.substr(0, lead));
  t.core = utf8_encode(v.substr(lead, trail_begin - lead));
  t.trail_punct = utf8_encode(v.substr(trail_begin));
  return t;
}

std::vector<Token> tokenize(std::string_view text, Unit unit, const PunctuationSet& punct) {
  std::vector<Token> tokens;
  const std::u32string s = utf8_decode(text);
  if (unit == Unit::kChar) {
    for (char32_t c : s) {
      if (is_whitespace(c)) continue;
      std::string one;
      utf8_append(one, c);
      tokens.push_back(make_token(one, punct));
    }
    return tokens;
  }
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_whitespace(s[i])) ++i;
    const std::size_t begin = i;
    while (i < s.size() && !is_whitespace(s[i])) ++i;
    if (i > begin) {
      tokens.push_back(make_token(utf8_encode(std::u32string_view(s).substr(begin, i - begin)), punct));
    }
  }
  return tokens;
}

bool contains_punctuation(std::string_view text, const PunctuationSet& punct) {
  const std::u32string s = utf8_decode(text);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (punct.is_punctuation_at(s, i)) return true;
  }
  return false;
}

bool contains_uppercase(std::string_view text) {
  const std::u32string s = utf8_decode(text);
  return std::any_of(s.begin(), s.end(), is_uppercase);
}

bool contains_cased_letter(std::string_view text) {
  const std::u32string s = utf8_decode(text);
  return std::any_of(s.begin(), s.end(), is_cased);
}

// ---------------------------------------------------------------------------

const LanguageConventions& LanguageConventions::defaults() {
  static const LanguageConventions kDefaults;
  return kDefaults;
}

Unit LanguageConventions::metric_unit_for(std::string_view language) const {
  return char_scored.contains(std::string(language)) ? Unit::kChar : Unit::kWord;
}

bool LanguageConventions::is_caseless(std::string_view language) const {
  return caseless.contains(std::string(language));
}

}  // namespace s2tcurate
