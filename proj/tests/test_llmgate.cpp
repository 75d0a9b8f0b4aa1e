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

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "s2tcurate/error.hpp"
#include "s2tcurate/llmgate.hpp"
#include "test_util.hpp"

using namespace s2tcurate;
using namespace std::chrono_literals;

namespace {

// In-process OpenAI-style server on an ephemeral port.
class FakeServer {
 public:
  explicit FakeServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/chat/completions", handler);
    server_.Post("/v1/completions", handler);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string chat_reply(const std::string& text) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}}.dump();
}

EndpointConfig fast_config(const std::string& url) {
  EndpointConfig c;
  c.base_url = url;
  c.timeout_sec = 0.3;
  c.backoff_initial = 5ms;
  c.backoff_max = 20ms;
  return c;
}

class CountingBackend : public CompletionBackend {
 public:
  std::string complete(const std::string& prompt) override {
    const int now = ++active_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(2ms);
    --active_;
    return prompt + "!";
  }
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
};

}  // namespace

TEST_SUITE("llmgate") {
  TEST_CASE("prompt rendering") {
    const auto p = render_prompt(PromptTemplate::english(), "English", "the cat sat");
    CHECK(p.find("Here is the sentence: the cat sat. Here is the output:") != std::string::npos);
    CHECK(p.find("For the given English sentence") != std::string::npos);
    CHECK(p.find("<language>") == std::string::npos);
    CHECK_THROWS_AS(render_prompt(PromptTemplate::english(), "English", ""), DataError);
    // Input containing a placeholder is not re-expanded.
    CHECK(render_prompt(PromptTemplate::english(), "English", "<language>").find("sentence: <language>.") !=
          std::string::npos);
  }

  TEST_CASE("template validation") {
    CHECK_THROWS_AS(PromptTemplate("eng", "no placeholders"), ConfigError);
    CHECK_THROWS_AS(PromptTemplate("eng", "<language> only"), ConfigError);
    CHECK_THROWS_AS(PromptTemplate("eng", "<language> <input> <input>"), ConfigError);
    CHECK_NOTHROW(PromptTemplate("eng", "<language>: <input>"));
  }

  TEST_CASE("registry selects per language") {
    PromptRegistry reg;
    reg.add(PromptTemplate("deu", "Satz auf <language>: <input>"), "Deutsch");
    CHECK(reg.select("deu").language() == "deu");
    CHECK(reg.select("fra").language() == "eng");
    CHECK(reg.render("deu", "hallo") == "Satz auf Deutsch: hallo");
    CHECK(reg.render("fra", "salut").find("For the given French sentence") != std::string::npos);

    testutil::TempDir dir;
    testutil::write_file(dir.file("p.json"), R"({"pol": {"display_name": "Polish", "template": "<language> <input>"}})");
    reg.load_file(dir.file("p.json"));
    CHECK(reg.render("pol", "x") == "Polish x");
    testutil::write_file(dir.file("bad.json"), R"({"ita": {"template": "<language>"}})");
    CHECK_THROWS_AS(reg.load_file(dir.file("bad.json")), ConfigError);
  }

  TEST_CASE("mock backend is deterministic") {
    MockBackend mock;
    const std::string prompt = render_prompt(PromptTemplate::english(), "English", "yes i think so");
    CHECK(mock.complete(prompt) == "Yes I think so.");
    CHECK(mock.complete(prompt) == mock.complete(prompt));
    CHECK(MockBackend::restore("done?") == "Done?");
  }

  TEST_CASE("wire format") {
    const auto body = nlohmann::json::parse(HttpBackend::chat_request_body("m", "p"));
    CHECK(body["temperature"] == 0);
    CHECK(body["n"] == 1);
    CHECK(body["messages"][0]["content"] == "p");
    CHECK(HttpBackend::parse_chat_response(chat_reply("ok")) == "ok");
    CHECK_THROWS_AS(HttpBackend::parse_chat_response("{}"), EndpointError);
    const auto lp = HttpBackend::parse_score_response(
        R"({"choices":[{"logprobs":{"token_logprobs":[null,-1.0,-2.0,-9.0]}}],"usage":{"prompt_tokens":3}})");
    CHECK(lp == std::vector<double>{-1.0, -2.0});
  }

  TEST_CASE("timeouts are retried") {
    std::atomic<int> calls{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
      if (++calls <= 2) std::this_thread::sleep_for(700ms);
      res.set_content(chat_reply("Restored."), "application/json");
    });
    std::vector<std::string> log;
    LlmGate gate(make_backend(fast_config(server.url())), fast_config(server.url()),
                 [&](const std::string& m) { log.push_back(m); });
    const auto r = gate.complete("prompt");
    REQUIRE(r.ok());
    CHECK(*r.text == "Restored.");
    CHECK(r.retries == 2);
    CHECK(log.size() == 2);
  }

  TEST_CASE("server errors are retried, client errors are not") {
    std::atomic<int> calls{0};
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      if (req.body.find("bad") != std::string::npos) {
        res.status = 400;
        return;
      }
      if (calls <= 2) {
        res.status = 503;
        return;
      }
      res.set_content(chat_reply(" ok "), "application/json");
    });
    LlmGate gate(make_backend(fast_config(server.url())), fast_config(server.url()));
    const auto r = gate.complete("good");
    CHECK(r.retries == 2);
    CHECK(*r.text == "ok");
    const int before = calls;
    const auto bad = gate.complete("bad");
    CHECK_FALSE(bad.ok());
    CHECK(bad.retries == 0);
    CHECK(calls == before + 1);
  }

  TEST_CASE("endpoint down fails open") {
    httplib::Server probe;
    const int port = probe.bind_to_any_port("127.0.0.1");
    probe.stop();
    const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    auto cfg = fast_config(url);
    cfg.max_retries = 1;
    LlmGate gate(make_backend(cfg), cfg);
    auto e = testutil::make_example("a", "the cat sat");
    const auto cands = generate_candidates({e}, PromptRegistry{}, gate);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].status == "llm_failed");
    CHECK(cands[0].candidate_text == "the cat sat");
  }

  TEST_CASE("in-flight requests are bounded and ordered") {
    auto backend = std::make_shared<CountingBackend>();
    EndpointConfig cfg;
    cfg.max_in_flight = 3;
    LlmGate gate(backend, cfg);
    std::vector<std::string> prompts;
    for (int i = 0; i < 60; ++i) prompts.push_back("p" + std::to_string(i));
    const auto out = gate.complete_all(prompts);
    for (int i = 0; i < 60; ++i) CHECK(*out[i].text == prompts[i] + "!");
    CHECK(backend->peak_ <= 3);
  }

  TEST_CASE("perplexity") {
    const std::vector<double> one{-1.0};
    CHECK(perplexity(one) == doctest::Approx(std::exp(1.0)));
    CHECK_THROWS_AS(perplexity(std::vector<double>{}), DataError);
    const std::vector<std::vector<double>> two{{-1.0, -2.0}, {-0.5}};
    double sum = 0;
    int n = 0;
    for (const auto& t : two) {
      for (double x : t) sum += x, ++n;
    }
    CHECK(pooled_perplexity(two) == doctest::Approx(std::exp(-sum / n)));
    MockBackend mock;
    CHECK(mock.token_logprobs("a bb").size() == 2);
    CHECK_THROWS_AS(CountingBackend{}.token_logprobs("x"), FeatureUnavailable);
  }

  TEST_CASE("candidate file round trip") {
    testutil::TempDir dir;
    CandidateRecord c{"a", "Hi.", "ok", std::nullopt};
    CandidateRecord d{"b", "yo", "llm_failed", std::string("Src.")};
    testutil::write_file(dir.file("c.jsonl"), serialize_candidate(c) + "\n" + serialize_candidate(d) + "\n");
    const auto back = read_candidates(dir.file("c.jsonl"));
    REQUIRE(back.size() == 2);
    CHECK(back[1].src_candidate_text == std::optional<std::string>("Src."));
    testutil::write_file(dir.file("bad.jsonl"), R"({"id":"a","candidate_text":"x","status":"weird"})" "\n");
    CHECK_THROWS_AS(read_candidates(dir.file("bad.jsonl")), SchemaError);
  }
}
