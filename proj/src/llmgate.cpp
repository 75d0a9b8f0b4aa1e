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

#include "s2tcurate/llmgate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <unicode/uchar.h>
#include <json.hpp>

#include "s2tcurate/error.hpp"
#include "s2tcurate/jsonl.hpp"
#include "s2tcurate/textnorm.hpp"

namespace s2tcurate {
namespace {

using nlohmann::json;

constexpr std::string_view kLanguagePlaceholder = "<language>";
constexpr std::string_view kInputPlaceholder = "<input>";

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

const std::map<std::string, std::string, std::less<>>& builtin_names() {
  static const std::map<std::string, std::string, std::less<>> kNames{
      {"eng", "English"}, {"zho", "Chinese"},    {"deu", "German"},
      {"fra", "French"},  {"spa", "Spanish"},    {"ita", "Italian"},
      {"nld", "Dutch"},   {"por", "Portuguese"}, {"pol", "Polish"},
      {"jpn", "Japanese"}, {"kor", "Korean"},    {"rus", "Russian"},
  };
  return kNames;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

// ---------------------------------------------------------------------------

PromptTemplate::PromptTemplate(std::string language, std::string text)
    : language_(std::move(language)), text_(std::move(text)) {
  if (count_occurrences(text_, kInputPlaceholder) != 1) {
    throw ConfigError("prompt template for '" + language_ + "' must contain <input> exactly once");
  }
  if (count_occurrences(text_, kLanguagePlaceholder) == 0) {
    throw ConfigError("prompt template for '" + language_ + "' must contain <language>");
  }
}

PromptTemplate PromptTemplate::english() { return PromptTemplate("eng", std::string(kEnglishPrompt)); }

std::string render_prompt(const PromptTemplate& tmpl, std::string_view language_display_name,
                          std::string_view input) {
  if (input.empty()) throw DataError("cannot render a prompt for empty input");
  std::string out = tmpl.text();
  // <input> first: the sentence itself may contain "<language>".
  const auto pos = out.find(kInputPlaceholder);
  std::string head = out.substr(0, pos);
  std::string tail = out.substr(pos + kInputPlaceholder.size());
  replace_all(head, kLanguagePlaceholder, language_display_name);
  replace_all(tail, kLanguagePlaceholder, language_display_name);
  return head + std::string(input) + tail;
}

PromptRegistry::PromptRegistry() { templates_.emplace("eng", PromptTemplate::english()); }

void PromptRegistry::add(PromptTemplate tmpl, std::optional<std::string> display_name) {
  const std::string lang = tmpl.language();
  templates_.insert_or_assign(lang, std::move(tmpl));
  if (display_name) names_[lang] = *display_name;
}

void PromptRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prompt file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("prompt file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("prompt file '" + path + "' must be a JSON object");
  for (const auto& [lang, entry] : j.items()) {
    if (!entry.is_object() || !entry.contains("template") || !entry["template"].is_string()) {
      throw ConfigError("prompt file '" + path + "': entry '" + lang + "' needs a string 'template'");
    }
    std::optional<std::string> name;
    if (entry.contains("display_name")) name = entry["display_name"].get<std::string>();
    add(PromptTemplate(lang, entry["template"].get<std::string>()), name);
  }
}

const PromptTemplate& PromptRegistry::select(std::string_view language) const {
  if (auto it = templates_.find(language); it != templates_.end()) return it->second;
  return templates_.find(std::string_view("eng"))->second;
}

std::string PromptRegistry::display_name(std::string_view language) const {
  if (auto it = names_.find(language); it != names_.end()) return it->second;
  if (auto it = builtin_names().find(language); it != builtin_names().end()) return it->second;
  return std::string(language);
}

std::string PromptRegistry::render(std::string_view language, std::string_view input) const {
  return render_prompt(select(language), display_name(language), input);
}

// ---------------------------------------------------------------------------

std::vector<double> CompletionBackend::token_logprobs(const std::string&) {
  throw FeatureUnavailable("backend does not support log-probability scoring");
}

HttpBackend::HttpBackend(EndpointConfig config) : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw ConfigError("endpoint must be an http:// URL, got '" + url + "'");
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_begin);
  prefix_ = path_begin == std::string::npos ? std::string("/v1") : url.substr(path_begin);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

std::string HttpBackend::chat_request_body(const std::string& model, const std::string& prompt) {
  json body;
  body["model"] = model;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = 0;
  body["top_p"] = 1;
  body["n"] = 1;
  body["stream"] = false;
  return body.dump();
}

std::string HttpBackend::score_request_body(const std::string& model, const std::string& text) {
  json body;
  body["model"] = model;
  body["prompt"] = text;
  body["max_tokens"] = 1;
  body["echo"] = true;
  body["logprobs"] = 0;
  body["temperature"] = 0;
  return body.dump();
}

std::string HttpBackend::parse_chat_response(const std::string& body) {
  try {
    const json j = json::parse(body);
    const json& choice = j.at("choices").at(0);
    if (choice.contains("message")) return choice.at("message").at("content").get<std::string>();
    return choice.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw EndpointError(std::string("unexpected completion response: ") + e.what(), false);
  }
}

std::vector<double> HttpBackend::parse_score_response(const std::string& body) {
  try {
    const json j = json::parse(body);
    const json& lp = j.at("choices").at(0).at("logprobs").at("token_logprobs");
    std::size_t prompt_tokens = lp.size();
    if (j.contains("usage") && j["usage"].contains("prompt_tokens")) {
      prompt_tokens = std::min(prompt_tokens, j["usage"]["prompt_tokens"].get<std::size_t>());
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < prompt_tokens; ++i) {
      if (!lp[i].is_null()) out.push_back(lp[i].get<double>());
    }
    return out;
  } catch (const json::exception& e) {
    throw FeatureUnavailable(std::string("endpoint returned no token log-probabilities: ") + e.what());
  }
}

std::string HttpBackend::post(const std::string& path, const std::string& body, bool scoring) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeout_sec));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(prefix_ + path, headers, body, "application/json");
  if (!res) {
    throw EndpointError("request to " + scheme_host_port_ + prefix_ + path + " failed: " +
                            httplib::to_string(res.error()),
                        true);
  }
  const int status = res->status;
  if (status == 200) return res->body;
  const std::string what = "endpoint returned HTTP " + std::to_string(status);
  if (status == 429 || status == 408 || status >= 500) throw EndpointError(what, true);
  if (scoring) throw FeatureUnavailable(what + " for scoring request");
  throw EndpointError(what, false);
}

std::string HttpBackend::complete(const std::string& prompt) {
  return parse_chat_response(post("/chat/completions", chat_request_body(config_.model_name, prompt), false));
}

std::vector<double> HttpBackend::token_logprobs(const std::string& text) {
  return parse_score_response(post("/completions", score_request_body(config_.model_name, text), true));
}

// ---------------------------------------------------------------------------

std::string MockBackend::extract_input(const std::string& prompt) {
  static constexpr std::string_view kBefore = "Here is the sentence: ";
  static constexpr std::string_view kAfter = ". Here is the output:";
  const auto b = prompt.find(kBefore);
  const auto e = prompt.rfind(kAfter);
  if (b == std::string::npos || e == std::string::npos || e < b + kBefore.size()) return prompt;
  return prompt.substr(b + kBefore.size(), e - b - kBefore.size());
}

std::string MockBackend::restore(const std::string& sentence) {
  auto tokens = tokenize(sentence, Unit::kWord);
  if (tokens.empty()) return sentence;
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::u32string w = utf8_decode(tokens[i].surface);
    const bool lone_i = w == U"i";
    if ((i == 0 || lone_i) && !w.empty()) w[0] = static_cast<char32_t>(u_toupper(static_cast<UChar32>(w[0])));
    if (i > 0) out += ' ';
    out += utf8_encode(w);
  }
  const std::u32string tail = utf8_decode(tokens.back().surface);
  if (!PunctuationSet::standard().is_punctuation(tail.back())) out += '.';
  return out;
}

std::string MockBackend::complete(const std::string& prompt) { return restore(extract_input(prompt)); }

std::vector<double> MockBackend::token_logprobs(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : tokenize(text, Unit::kWord)) {
    out.push_back(-(1.0 + static_cast<double>(t.surface.size() % 7) * 0.25));
  }
  return out;
}

std::shared_ptr<CompletionBackend> make_backend(const EndpointConfig& config) {
  if (config.base_url == "mock") return std::make_shared<MockBackend>();
  return std::make_shared<HttpBackend>(config);
}

// ---------------------------------------------------------------------------

LlmGate::LlmGate(std::shared_ptr<CompletionBackend> backend, const EndpointConfig& config, Logger logger)
    : backend_(std::move(backend)),
      max_in_flight_(std::max<std::size_t>(1, config.max_in_flight)),
      max_retries_(config.max_retries),
      backoff_initial_(config.backoff_initial),
      backoff_max_(config.backoff_max),
      logger_(std::move(logger)),
      in_flight_(std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(max_in_flight_))) {}

CompletionResult LlmGate::complete(const std::string& prompt) {
  CompletionResult result;
  auto delay = backoff_initial_;
  for (std::size_t attempt = 0;; ++attempt) {
    bool transient = false;
    in_flight_->acquire();
    try {
      result.text = trim(backend_->complete(prompt));
      in_flight_->release();
      return result;
    } catch (const EndpointError& e) {
      in_flight_->release();
      result.error = e.what();
      transient = e.transient();
    }
    if (!transient || attempt >= max_retries_) return result;
    ++result.retries;
    if (logger_) {
      logger_("llm request failed (" + result.error + "); retry " + std::to_string(result.retries) +
              "/" + std::to_string(max_retries_));
    }
    std::this_thread::sleep_for(delay);
    delay = std::min(delay * 2, backoff_max_);
  }
}

std::vector<CompletionResult> LlmGate::complete_all(std::span<const std::string> prompts) {
  std::vector<CompletionResult> out(prompts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < prompts.size(); i = next++) out[i] = complete(prompts[i]);
  };
  const std::size_t workers = std::min(max_in_flight_, prompts.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  return out;
}

std::vector<double> LlmGate::token_logprobs(const std::string& text) {
  in_flight_->acquire();
  try {
    auto lp = backend_->token_logprobs(text);
    in_flight_->release();
    return lp;
  } catch (...) {
    in_flight_->release();
    throw;
  }
}

double perplexity(std::span<const double> logprobs) {
  if (logprobs.empty()) throw DataError("perplexity of an empty token sequence is undefined");
  double sum = 0.0;
  for (double lp : logprobs) sum += lp;
  return std::exp(-sum / static_cast<double>(logprobs.size()));
}

double pooled_perplexity(std::span<const std::vector<double>> per_text) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& lps : per_text) {
    for (double lp : lps) sum += lp;
    n += lps.size();
  }
  if (n == 0) throw DataError("perplexity of an empty token sequence is undefined");
  return std::exp(-sum / static_cast<double>(n));
}

// ---------------------------------------------------------------------------

std::vector<CandidateRecord> generate_candidates(const std::vector<Example>& examples,
                                                 const PromptRegistry& prompts, LlmGate& gate) {
  std::vector<std::string> rendered;
  std::vector<std::size_t> owner;
  std::vector<CandidateRecord> out(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Example& e = examples[i];
    out[i] = {e.id, e.y_tgt, "ok", std::nullopt};
    if (tokenize(e.y_tgt, Unit::kWord).empty()) continue;
    const std::string& lang = e.task == Task::kSt && e.target_language ? *e.target_language : e.language;
    rendered.push_back(prompts.render(lang, e.y_tgt));
    owner.push_back(i);
  }
  const auto results = gate.complete_all(rendered);
  for (std::size_t r = 0; r < results.size(); ++r) {
    CandidateRecord& c = out[owner[r]];
    if (results[r].ok()) {
      c.candidate_text = *results[r].text;
    } else {
      c.status = "llm_failed";
    }
  }
  return out;
}

std::string serialize_candidate(const CandidateRecord& c) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["candidate_text"] = c.candidate_text;
  j["status"] = c.status;
  if (c.src_candidate_text) j["src_candidate_text"] = *c.src_candidate_text;
  return j.dump();
}

std::vector<CandidateRecord> read_candidates(const std::string& path) {
  std::vector<CandidateRecord> out;
  std::unordered_set<std::string> seen;
  for_each_jsonl(path, [&](const json& j, std::size_t line) {
    auto str = [&](const char* key) {
      auto it = j.find(key);
      if (it == j.end()) throw SchemaError(path, line, key, "missing required field");
      if (!it->is_string()) throw SchemaError(path, line, key, "expected a string");
      return it->get<std::string>();
    };
    CandidateRecord c{str("id"), str("candidate_text"), "ok", std::nullopt};
    if (j.contains("status")) c.status = str("status");
    if (c.status != "ok" && c.status != "llm_failed") {
      throw SchemaError(path, line, "status", "expected 'ok' or 'llm_failed'");
    }
    if (j.contains("src_candidate_text")) c.src_candidate_text = str("src_candidate_text");
    if (!seen.insert(c.id).second) throw SchemaError(path, line, "id", "duplicate id '" + c.id + "'");
    out.push_back(std::move(c));
  });
  return out;
}

}  // namespace s2tcurate
