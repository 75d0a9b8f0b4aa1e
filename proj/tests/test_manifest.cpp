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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "s2tcurate/error.hpp"
#include "s2tcurate/manifest.hpp"
#include "test_util.hpp"

using namespace s2tcurate;
using testutil::make_example;

TEST_SUITE("manifest") {
  TEST_CASE("empty file yields no examples") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("m.jsonl"), "");
    CHECK(read_manifest(dir.file("m.jsonl")).empty());
  }

  TEST_CASE("round trip is byte identical") {
    testutil::TempDir dir;
    std::vector<Example> ex{make_example("a", "Hello, world."), make_example("b", "второй", 1.0, 2.5)};
    ex[1].task = Task::kSt;
    ex[1].target_language = "eng";
    ex[1].y_tgt = "second";
    ex[1].y_prev = "Hello, world.";
    write_manifest(dir.file("m.jsonl"), ex);
    const auto back = read_manifest(dir.file("m.jsonl"));
    REQUIRE(back.size() == 2);
    CHECK(back == ex);
    write_manifest(dir.file("m2.jsonl"), back);
    CHECK(testutil::read_file(dir.file("m.jsonl")) == testutil::read_file(dir.file("m2.jsonl")));
  }

  TEST_CASE("missing y_tgt names field and line") {
    testutil::TempDir dir;
    std::ostringstream good;
    write_manifest(good, {make_example("a", "x")});
    auto bad = nlohmann::json::parse(serialize_example(make_example("b", "y")));
    bad.erase("y_tgt");
    testutil::write_file(dir.file("m.jsonl"), good.str() + bad.dump() + "\n");
    try {
      read_manifest(dir.file("m.jsonl"));
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.field() == "y_tgt");
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("y_tgt") != std::string::npos);
      CHECK(e.code() == ExitCode::kData);
    }
  }

  TEST_CASE("malformed line carries content") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("m.jsonl"), "\n{not json\n");
    try {
      read_manifest(dir.file("m.jsonl"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.content() == "{not json");
    }
  }

  TEST_CASE("duplicate ids and invariants are rejected") {
    testutil::TempDir dir;
    write_manifest(dir.file("dup.jsonl"), {make_example("a", "x"), make_example("a", "y")});
    CHECK_THROWS_AS(read_manifest(dir.file("dup.jsonl")), SchemaError);

    auto e = make_example("a", "x");
    e.duration_sec = 0.0;
    CHECK_THROWS_AS(validate_example(e), SchemaError);
    e = make_example("a", "x");
    e.target_language = "deu";
    CHECK_THROWS_AS(validate_example(e), SchemaError);
  }

  TEST_CASE("corpus stats arithmetic") {
    std::vector<Example> ex{make_example("a", "x", 0, 3), make_example("b", "y", 3, 5)};
    const auto one = corpus_stats(ex);
    REQUIRE(one.size() == 1);
    CHECK(one[0].volume_hours == doctest::Approx(8.0 / 3600.0));
    CHECK(one[0].num_examples == 2);

    ex.push_back(make_example("c", "z", 0, 1, "other"));
    CHECK(corpus_stats(ex).size() == 2);
  }

  TEST_CASE("aidatatang-sized fixture") {
    // 164,000 clips adding up to 140 hours.
    const double per_clip = 140.0 * 3600.0 / 164000.0;
    StatsAccumulator acc;
    Example e = make_example("", "你好", 0.0, per_clip, "aidatatang", "zho");
    for (int i = 0; i < 164000; ++i) {
      e.id = "utt" + std::to_string(i);
      e.audio.recording_id = e.id;
      acc.add(e);
    }
    const auto stats = acc.finish();
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].num_examples == 164000);
    CHECK(std::abs(stats[0].volume_hours - 140.0) < 1e-9);
    CHECK_FALSE(stats[0].has_case.has_value());
    CHECK_FALSE(stats[0].has_longform);
    const std::string table = format_stats_table(stats);
    CHECK(table.find("140.00") != std::string::npos);
    CHECK(table.find("164K") != std::string::npos);
  }

  TEST_CASE("text features") {
    CHECK_FALSE(detect_text_features({make_example("a", "hello world")})["ds"].has_punctuation);
    CHECK(detect_text_features({make_example("a", "hello world")})["ds"].has_case == false);
    const auto both = detect_text_features({make_example("a", "Hello, world")})["ds"];
    CHECK(both.has_punctuation);
    CHECK(both.has_case == true);
    const auto zh = detect_text_features({make_example("a", "你好世界", 0, 1, "ds", "zho")})["ds"];
    CHECK_FALSE(zh.has_case.has_value());
  }

  TEST_CASE("feature threshold needs a real fraction") {
    std::vector<Example> ex;
    for (int i = 0; i < 1000; ++i) ex.push_back(make_example("u" + std::to_string(i), "plain text", i, 1));
    ex[0].y_tgt = "One stray capital.";
    CHECK_FALSE(corpus_stats(ex)[0].has_punctuation);
    for (int i = 1; i < 10; ++i) ex[i].y_tgt = "Capital, too.";
    CHECK(corpus_stats(ex)[0].has_punctuation);
  }

  TEST_CASE("long-form detection and shard merge") {
    std::vector<Example> ex{make_example("a", "x", 0, 2), make_example("b", "y", 2, 2)};
    CHECK(corpus_stats(ex)[0].has_longform);

    StatsAccumulator left, right, whole;
    left.add(ex[0]);
    right.add(ex[1]);
    whole.add(ex[0]);
    whole.add(ex[1]);
    left.merge(right);
    const auto merged = left.finish();
    const auto direct = whole.finish();
    CHECK(merged[0].num_examples == direct[0].num_examples);
    CHECK(merged[0].volume_hours == doctest::Approx(direct[0].volume_hours));
    CHECK(merged[0].has_longform == direct[0].has_longform);
  }
}
