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

// LLM access for punctuation and casing restoration: prompt templates, a
// JSON-over-HTTP chat/completions client with retries and bounded
// concurrency, and a deterministic offline mock.  Decoding is always greedy.

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2tcurate/manifest.hpp"

namespace s2tcurate {

inline constexpr std::string_view kEnglishPrompt =
    "For the given <language> sentence, restore the upper-case characters (if applicable) and "
    "add punctuation WITHOUT CHANGING ANY WORDS. Answer in <language> without any explanation. "
    "Here is the sentence: <input>. Here is the output:";

class PromptTemplate {
 public:
  // Requires <input> exactly once and <language> at least once.  Throws
  // ConfigError.
  PromptTemplate(std::string language, std::string text);

  static PromptTemplate english();

  const std::string& language() const { return language_; }
  const std::string& text() const { return text_; }

 private:
  std::string language_;
  std::string text_;
};

// Substitutes the placeholders.  Throws DataError for empty input.
std::string render_prompt(const PromptTemplate& tmpl, std::string_view language_display_name,
                          std::string_view input);

// Language -> template.  Languages without their own template use the
// English one.
class PromptRegistry {
 public:
  PromptRegistry();

  void add(PromptTemplate tmpl, std::optional<std::string> display_name = std::nullopt);
  // {"deu": {"display_name": "German", "template": "..."}, ...}
  void load_file(const std::string& path);

  const PromptTemplate& select(std::string_view language) const;
  std::string display_name(std::string_view language) const;
  std::string render(std::string_view language, std::string_view input) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
  std::map<std::string, std::string, std::less<>> names_;
};

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model_name = "mistral-7b-instruct";
  std::string api_key;
  double timeout_sec = 60.0;
  std::size_t max_in_flight = 4;
  std::size_t max_retries = 3;
  std::chrono::milliseconds backoff_initial{500};
  std::chrono::milliseconds backoff_max{8000};
};

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;

  // Throws EndpointError; transient() errors are retried by LlmGate.
  virtual std::string complete(const std::string& prompt) = 0;

  // Per-token log-probabilities of `text`.  Default: FeatureUnavailable.
  virtual std::vector<double> token_logprobs(const std::string& text);
};

// OpenAI-style HTTP endpoints: POST <base>/chat/completions and
// <base>/completions (echo + logprobs for scoring).  Plain http only.
class HttpBackend : public CompletionBackend {
 public:
  explicit HttpBackend(EndpointConfig config);

  std::string complete(const std::string& prompt) override;
  std::vector<double> token_logprobs(const std::string& text) override;

  // Request bodies, exposed for tests and for documenting the wire format.
  static std::string chat_request_body(const std::string& model, const std::string& prompt);
  static std::string score_request_body(const std::string& model, const std::string& text);
  static std::string parse_chat_response(const std::string& body);
  static std::vector<double> parse_score_response(const std::string& body);

 private:
  std::string post(const std::string& path, const std::string& body, bool scoring);

  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string prefix_;
};

// Restores the sentence embedded in a rendered prompt with fixed rules:
// first letter and standalone "i" uppercased, final period added.
class MockBackend : public CompletionBackend {
 public:
  std::string complete(const std::string& prompt) override;
  std::vector<double> token_logprobs(const std::string& text) override;

  static std::string extract_input(const std::string& prompt);
  static std::string restore(const std::string& sentence);
};

struct CompletionResult {
  std::optional<std::string> text;
  std::size_t retries = 0;
  std::string error;

  bool ok() const { return text.has_value(); }
};

class LlmGate {
 public:
  using Logger = std::function<void(const std::string&)>;

  LlmGate(std::shared_ptr<CompletionBackend> backend, const EndpointConfig& config,
          Logger logger = nullptr);

  // Never throws for endpoint failures; they come back as !ok().
  CompletionResult complete(const std::string& prompt);
  // Results in input order.
  std::vector<CompletionResult> complete_all(std::span<const std::string> prompts);

  std::vector<double> token_logprobs(const std::string& text);

 private:
  std::shared_ptr<CompletionBackend> backend_;
  std::size_t max_in_flight_;
  std::size_t max_retries_;
  std::chrono::milliseconds backoff_initial_;
  std::chrono::milliseconds backoff_max_;
  Logger logger_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

// exp(-mean log-prob).  Throws DataError for an empty list.
double perplexity(std::span<const double> logprobs);
// Pooled over the concatenation of all token log-probs.
double pooled_perplexity(std::span<const std::vector<double>> per_text);

struct CandidateRecord {
  std::string id;
  std::string candidate_text;
  std::string status;  // "ok" or "llm_failed"
  std::optional<std::string> src_candidate_text;  // st only, optional
};

// Prompts the LLM with each example's y_tgt (target language for st).  Failed
// requests yield the original text with status llm_failed.
std::vector<CandidateRecord> generate_candidates(const std::vector<Example>& examples,
                                                 const PromptRegistry& prompts, LlmGate& gate);

std::vector<CandidateRecord> read_candidates(const std::string& path);
std::string serialize_candidate(const CandidateRecord& c);

// "mock" selects MockBackend, anything else is an HTTP base URL.
std::shared_ptr<CompletionBackend> make_backend(const EndpointConfig& config);

}  // namespace s2tcurate
