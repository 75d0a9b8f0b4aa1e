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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "s2tcurate/error.hpp"
#include "s2tcurate/jsonl.hpp"
#include "s2tcurate/pipeline.hpp"
#include "s2tcurate/toy_corpus.hpp"
#include "test_util.hpp"

using namespace s2tcurate;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const std::string& log) {
  const std::string cmd = std::string(S2TCURATE_CLI) + " " + args + " >" + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("toy corpus has known ground truth") {
    const auto toy = make_toy_corpus();
    CHECK(toy.examples.size() == 200);
    CHECK(toy.noisy_ids.size() == 20);
    CHECK(toy.timelines.size() == 10);
  }

  TEST_CASE("full toy pipeline discards exactly the noisy examples") {
    testutil::TempDir dir;
    const auto toy = make_toy_corpus();
    write_toy_corpus(toy, dir.path().string());
    const auto report = run_pipeline(dir.file("pipeline.json"));
    CHECK(report["status"] == "ok");
    const auto& filter = report["stages"][2]["summary"];
    CHECK(filter["input_count"] == 200);
    CHECK(filter["discarded"] == 20);
    CHECK(filter["output_count"].get<int>() + filter["discarded"].get<int>() == 200);

    std::vector<std::string> discarded;
    for_each_jsonl(dir.file("out/filter_decisions.jsonl"), [&](const nlohmann::json& j, std::size_t) {
      if (j["verdict"] == "discard") discarded.push_back(j["id"]);
    });
    std::sort(discarded.begin(), discarded.end());
    CHECK(discarded == toy.noisy_ids);
    CHECK(line_count(dir.file("out/filtered.jsonl")) == 180);
    CHECK(line_count(dir.file("out/restored.jsonl")) == 180);
    const auto proxy = nlohmann::json::parse(testutil::read_file(dir.file("out/proxy_sample.jsonl")));
    CHECK(proxy["target_size"] == 90);
    CHECK(proxy["ids"].size() == 90);
    CHECK(report["final_manifest"] == "out/restored.jsonl");
  }

  TEST_CASE("stats-only config produces nothing else") {
    testutil::TempDir dir;
    write_toy_corpus(make_toy_corpus(), dir.path().string());
    testutil::write_file(dir.file("only.json"), R"({"manifest":"manifest.jsonl","output_dir":"o","stages":[{"name":"stats"}]})");
    run_pipeline(dir.file("only.json"));
    std::set<std::string> files;
    for (const auto& f : fs::directory_iterator(dir.path() / "o")) files.insert(f.path().filename().string());
    CHECK(files == std::set<std::string>{"run.json", "stats.json", "stats.txt"});
  }

  TEST_CASE("config errors are caught up front") {
    testutil::TempDir dir;
    write_toy_corpus(make_toy_corpus(), dir.path().string());
    testutil::write_file(dir.file("bad.json"), R"({"manifest":"manifest.jsonl","stages":[{"name":"stats"},{"name":"frobnicate"}]})");
    CHECK_THROWS_AS(run_pipeline(dir.file("bad.json")), ConfigError);
    testutil::write_file(dir.file("missing.json"), R"({"manifest":"nope.jsonl","stages":[{"name":"stats"}]})");
    CHECK_THROWS_AS(run_pipeline(dir.file("missing.json")), DataError);
  }

  TEST_CASE("failed stage is recorded") {
    testutil::TempDir dir;
    write_toy_corpus(make_toy_corpus(), dir.path().string());
    testutil::write_file(dir.file("hyps.jsonl"), "{broken\n");
    CHECK_THROWS_AS(run_pipeline(dir.file("pipeline.json")), ParseError);
    const auto run = nlohmann::json::parse(testutil::read_file(dir.file("out/run.json")));
    CHECK(run["status"] == "failed");
    CHECK(run["failed_stage"] == "score");
  }

  TEST_CASE("cli exit codes") {
    testutil::TempDir dir;
    write_toy_corpus(make_toy_corpus(), dir.path().string());
    const std::string log = dir.file("log.txt");
    CHECK(run_cli("", log) == 1);
    CHECK(run_cli("stats --manifest " + dir.file("manifest.jsonl"), log) == 0);
    CHECK(testutil::read_file(log).find("toycorpus") != std::string::npos);
    CHECK(run_cli("stats --manifest " + dir.file("nope.jsonl"), log) == 2);
    CHECK(run_cli("filter --manifest " + dir.file("manifest.jsonl") + " --hyp " + dir.file("hyps.jsonl") +
                      " --k 150 --out " + dir.file("f.jsonl") + " --decisions " + dir.file("d.jsonl"),
                  log) == 1);
    CHECK(run_cli("filter --manifest " + dir.file("manifest.jsonl") + " --hyp " + dir.file("hyps.jsonl") +
                      " --k 10 --out " + dir.file("f.jsonl") + " --decisions " + dir.file("d.jsonl"),
                  log) == 0);
    CHECK(line_count(dir.file("f.jsonl")) == 180);
    CHECK(run_cli("score --ref " + dir.file("manifest.jsonl") + " --hyp " + dir.file("hyps.jsonl") + " --metric cer",
                  log) == 0);
    CHECK(testutil::read_file(log).find("\"subset\": \"full\"") != std::string::npos);
    CHECK(run_cli("candidates --manifest " + dir.file("f.jsonl") + " --endpoint http://127.0.0.1:1/v1 --max-retries 0 --out " +
                      dir.file("c.jsonl"),
                  log) == 3);
    CHECK(run_cli("candidates --manifest " + dir.file("f.jsonl") + " --endpoint mock --out " + dir.file("c.jsonl"), log) == 0);
    CHECK(run_cli("restore --manifest " + dir.file("f.jsonl") + " --candidates " + dir.file("c.jsonl") + " --out " +
                      dir.file("r.jsonl") + " --audit " + dir.file("a.jsonl"),
                  log) == 0);
    CHECK(line_count(dir.file("a.jsonl")) == 180);
    CHECK(run_cli("splice --segments " + dir.file("segments.jsonl") + " --out " + dir.file("l.jsonl") + " --clean-only",
                  log) == 0);
    CHECK(run_cli("run --config " + dir.file("pipeline.json") + " --seed 5 --jobs 2", log) == 0);
    const auto run = nlohmann::json::parse(testutil::read_file(dir.file("out/run.json")));
    CHECK(run["seed"] == 5);
  }

  TEST_CASE("id/text reader") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("k.txt"), "utt1 hello world\nutt2\n");
    const auto k = read_id_text(dir.file("k.txt"));
    REQUIRE(k.size() == 2);
    CHECK(k[0].text == "hello world");
    CHECK(k[1].text.empty());
    testutil::write_file(dir.file("d.jsonl"), R"({"id":"a","hyp":"x"})" "\n" R"({"id":"a","hyp":"y"})" "\n");
    CHECK_THROWS_AS(read_id_text(dir.file("d.jsonl")), SchemaError);
  }
}
