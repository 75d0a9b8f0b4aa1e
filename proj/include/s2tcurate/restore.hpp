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

// Constrained acceptance of LLM punctuation and casing restoration.  Only
// casing substitutions, punctuation substitutions and punctuation insertions
// are taken from the candidate; everything else keeps the original words.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "s2tcurate/align.hpp"
#include "s2tcurate/manifest.hpp"

namespace s2tcurate {

enum class EditClass {
  kExactMatch,
  kCaseSub,
  kPunctSub,
  kPunctIns,
  kWordChange,
  kWordDeletion,
};

std::string_view edit_class_name(EditClass c);
bool is_acceptable(EditClass c);

struct EditDecision {
  AlignOp op;
  EditClass edit_class = EditClass::kExactMatch;
  bool accepted = true;
};

enum class RestoreStatus { kAccepted, kRejectedResidual, kRejectedNoChange };
std::string_view restore_status_name(RestoreStatus s);

struct RestorationOutcome {
  std::string original;
  std::string candidate;
  std::string applied;
  double residual_wer = 0.0;
  RestoreStatus status = RestoreStatus::kAccepted;
  std::vector<EditDecision> decisions;
};

inline constexpr double kDefaultRejectThreshold = 0.30;

// Word-level alignment of candidate against original.  Tokens align on
// their case-folded cores; each aligned pair is then classified by comparing
// surfaces.  With `caseless`, casing differences count as word changes.
std::vector<EditDecision> classify_edits(std::string_view original, std::string_view candidate,
                                         bool caseless = false);

// Rebuilds the text from the alignment: accepted edits take the candidate
// token, everything else the original.  Returns `original` verbatim when no
// edit other than exact matches was accepted.
std::string apply_accepted(std::string_view original, const std::vector<EditDecision>& decisions);

RestorationOutcome restore_text(std::string_view original, std::string_view candidate,
                                double reject_threshold = kDefaultRejectThreshold,
                                bool caseless = false);

struct RestoredExample {
  Example example;
  RestorationOutcome outcome;
  std::optional<RestorationOutcome> src_outcome;  // st with a y_src candidate
};

// Restores y_tgt (and y_src for asr).  For st, y_src is only touched when a
// separate source candidate is supplied.
RestoredExample restore_example(const Example& example, std::string_view candidate,
                                double reject_threshold = kDefaultRejectThreshold,
                                const std::optional<std::string>& src_candidate = std::nullopt,
                                const LanguageConventions& conv = LanguageConventions::defaults());

// Second pass: where example i's restored y_tgt replaced text that its chain
// successor carries as y_prev, rewrite that y_prev.  `original_tgt[i]` is
// example i's y_tgt before restoration.
std::size_t propagate_context(std::vector<Example>& examples,
                              const std::vector<std::string>& original_tgt);

}  // namespace s2tcurate
