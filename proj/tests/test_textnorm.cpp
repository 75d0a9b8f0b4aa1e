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

#include <random>
#include <string>

#include <doctest.h>

#include "s2tcurate/error.hpp"
#include "s2tcurate/textnorm.hpp"

using namespace s2tcurate;

namespace {

std::string random_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "a", "B", "c", "É", "ß", "ö", "İ", "Σ", "中", "文", " ", "  ", "\t", ",", ".", "?", "!",
      "'", "’", "-", "\"", "(", ")", "…", "«", "»", "x'y", "well-known", "¿", "0", "9"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 24);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += pieces[pick(rng)];
  return s;
}

std::string join_surfaces(const std::vector<Token>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace

TEST_SUITE("textnorm") {
  TEST_CASE("normalize examples") {
    CHECK(normalize("Hello, World!", NormalizationPolicy::plain()) == "hello world");
    CHECK(normalize("hello world", NormalizationPolicy::identity()) == "hello world");
    NormalizationPolicy fold_strip{true, true, false, std::nullopt};
    CHECK(normalize("What years of happiness have been mine, O Apollo,", fold_strip) ==
          "what years of happiness have been mine o apollo");
    CHECK(normalize("  a \t b  ", NormalizationPolicy::plain()) == "a b");
    CHECK(normalize("don't stop", NormalizationPolicy::plain()) == "don't stop");
    CHECK(normalize("'quoted' - well-known", NormalizationPolicy::plain()) == "quoted well-known");
  }

  TEST_CASE("char unit drops whitespace") {
    NormalizationPolicy p = NormalizationPolicy::plain();
    p.unit = Unit::kChar;
    CHECK(normalize("你好, 世界。", p) == "你好世界");
  }

  TEST_CASE("case folding is full Unicode folding") {
    CHECK(normalize("STRASSE Straße", NormalizationPolicy::plain()) == "strasse strasse");
    CHECK(normalize("ǅ", NormalizationPolicy::plain()) == "ǆ");
    CHECK(normalize("ΣΊΣΥΦΟΣ", NormalizationPolicy::plain()) == normalize("σίσυφος", NormalizationPolicy::plain()));
  }

  TEST_CASE("normalize is idempotent") {
    std::mt19937 rng(11);
    NormalizationPolicy char_plain = NormalizationPolicy::plain();
    char_plain.unit = Unit::kChar;
    const std::vector<NormalizationPolicy> policies = {
        NormalizationPolicy::identity(), NormalizationPolicy::plain(), char_plain,
        {true, false, false, std::nullopt}, {false, true, false, std::nullopt}, {false, false, true, std::nullopt}};
    for (int trial = 0; trial < 3000; ++trial) {
      const std::string s = random_text(rng);
      for (const auto& p : policies) {
        const std::string once = normalize(s, p);
        REQUIRE_MESSAGE(normalize(once, p) == once, "input: " << s);
      }
    }
  }

  TEST_CASE("tokenize examples") {
    CHECK(tokenize("", Unit::kWord).empty());
    const auto mine = tokenize("mine,", Unit::kWord);
    REQUIRE(mine.size() == 1);
    CHECK(mine[0].surface == "mine,");
    CHECK(mine[0].core == "mine");
    CHECK(mine[0].lead_punct.empty());
    CHECK(mine[0].trail_punct == ",");

    const auto what = tokenize("'What", Unit::kWord);
    REQUIRE(what.size() == 1);
    CHECK(what[0].core == "What");
    CHECK(what[0].lead_punct == "'");

    const auto me = make_token("me?'");
    CHECK(me.core == "me");
    CHECK(me.trail_punct == "?'");

    const auto dash = make_token("—");
    CHECK(dash.punctuation_only());
    CHECK(dash.lead_punct == "—");

    const auto chars = tokenize("ab c", Unit::kChar);
    REQUIRE(chars.size() == 3);
    CHECK(chars[2].surface == "c");
  }

  TEST_CASE("tokenize is lossless up to whitespace") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 3000; ++trial) {
      const std::string s = random_text(rng);
      const auto toks = tokenize(s, Unit::kWord);
      NormalizationPolicy collapse{false, false, true, std::nullopt};
      REQUIRE(join_surfaces(toks) == normalize(s, collapse));
      for (const auto& t : toks) REQUIRE(t.lead_punct + t.core + t.trail_punct == t.surface);
    }
  }

  TEST_CASE("language conventions") {
    CHECK(metric_unit_for("zho") == Unit::kChar);
    CHECK(metric_unit_for("eng") == Unit::kWord);
    CHECK(metric_unit_for("xxx") == Unit::kWord);
    CHECK(LanguageConventions::defaults().is_caseless("jpn"));
    CHECK_FALSE(LanguageConventions::defaults().is_caseless("deu"));
  }

  TEST_CASE("metric names") {
    CHECK(parse_metric("pc-wer") == Metric::kPcWer);
    CHECK(metric_name(parse_metric("cer")) == "cer");
    CHECK(policy_for(Metric::kPcCer).unit == Unit::kChar);
    CHECK(policy_for(Metric::kWer) == NormalizationPolicy{true, true, true, Unit::kWord});
    CHECK_THROWS_AS(parse_metric("bleu"), ConfigError);
  }

  TEST_CASE("feature predicates") {
    CHECK(contains_punctuation("Hello, world"));
    CHECK_FALSE(contains_punctuation("don't"));
    CHECK(contains_uppercase("Hello"));
    CHECK_FALSE(contains_uppercase("中文"));
    CHECK_FALSE(contains_cased_letter("中文"));
    CHECK(PunctuationSet(U"#").is_punctuation(U'#'));
    CHECK(utf8_encode(utf8_decode("aé中")) == "aé中");
    CHECK(utf8_decode("\xff") == U"�");
  }
}
