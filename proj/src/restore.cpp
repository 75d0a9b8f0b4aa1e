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

#include "s2tcurate/restore.hpp"

#include <algorithm>
#include <map>

#include "s2tcurate/longform.hpp"

namespace s2tcurate {
namespace {

const NormalizationPolicy kFoldOnly{true, false, false, std::nullopt};
const NormalizationPolicy kFoldStrip{true, true, false, std::nullopt};
const NormalizationPolicy kStripOnly{false, true, false, std::nullopt};

EditClass classify_sub(const Token& ref, const Token& hyp, bool caseless) {
  if (caseless) {
    if (normalize(ref.core, kStripOnly) == normalize(hyp.core, kStripOnly)) return EditClass::kPunctSub;
    return EditClass::kWordChange;
  }
  if (normalize(ref.core, kFoldStrip) != normalize(hyp.core, kFoldStrip)) return EditClass::kWordChange;
  if (normalize(ref.surface, kFoldOnly) == normalize(hyp.surface, kFoldOnly)) return EditClass::kCaseSub;
  return EditClass::kPunctSub;
}

// Tokens are aligned on their folded cores so that casing and punctuation
// edits line up with the word they modify.  Punctuation-only tokens get a
// key no word can produce.
Token alignment_key(const Token& t, bool caseless) {
  Token k;
  k.surface = t.punctuation_only() ? "\x1f" + t.surface : normalize(t.core, caseless ? kStripOnly : kFoldStrip);
  return k;
}

std::size_t word_count(std::string_view text) { return tokenize(text, Unit::kWord).size(); }

}  // namespace

std::string_view edit_class_name(EditClass c) {
  switch (c) {
    case EditClass::kExactMatch: return "exact_match";
    case EditClass::kCaseSub: return "case_sub";
    case EditClass::kPunctSub: return "punct_sub";
    case EditClass::kPunctIns: return "punct_ins";
    case EditClass::kWordChange: return "word_change";
    case EditClass::kWordDeletion: return "word_deletion";
  }
  return "?";
}

bool is_acceptable(EditClass c) {
  return c == EditClass::kExactMatch || c == EditClass::kCaseSub || c == EditClass::kPunctSub ||
         c == EditClass::kPunctIns;
}

std::string_view restore_status_name(RestoreStatus s) {
  switch (s) {
    case RestoreStatus::kAccepted: return "accepted";
    case RestoreStatus::kRejectedResidual: return "rejected_residual";
    case RestoreStatus::kRejectedNoChange: return "rejected_no_change";
  }
  return "?";
}

std::vector<EditDecision> classify_edits(std::string_view original, std::string_view candidate,
                                         bool caseless) {
  const auto ref = tokenize(original, Unit::kWord);
  const auto hyp = tokenize(candidate, Unit::kWord);
  std::vector<Token> ref_keys, hyp_keys;
  ref_keys.reserve(ref.size());
  hyp_keys.reserve(hyp.size());
  for (const auto& t : ref) ref_keys.push_back(alignment_key(t, caseless));
  for (const auto& t : hyp) hyp_keys.push_back(alignment_key(t, caseless));
  const Alignment a = align(ref_keys, hyp_keys);

  std::vector<EditDecision> out;
  out.reserve(a.ops.size());
  std::size_t i = 0;
  std::size_t j = 0;
  for (const auto& key_op : a.ops) {
    AlignOp op{key_op.kind, std::nullopt, std::nullopt};
    if (key_op.ref_token) op.ref_token = ref[i++];
    if (key_op.hyp_token) op.hyp_token = hyp[j++];
    EditClass c = EditClass::kExactMatch;
    switch (key_op.kind) {
      case EditKind::kMatch:
      case EditKind::kSub:
        if (op.ref_token->surface == op.hyp_token->surface) {
          op.kind = EditKind::kMatch;
        } else {
          op.kind = EditKind::kSub;
          c = classify_sub(*op.ref_token, *op.hyp_token, caseless);
        }
        break;
      case EditKind::kIns:
        c = op.hyp_token->punctuation_only() ? EditClass::kPunctIns : EditClass::kWordChange;
        break;
      case EditKind::kDel: c = EditClass::kWordDeletion; break;
    }
    out.push_back({std::move(op), c, is_acceptable(c)});
  }
  return out;
}

std::string apply_accepted(std::string_view original, const std::vector<EditDecision>& decisions) {
  const bool any_edit = std::any_of(decisions.begin(), decisions.end(), [](const EditDecision& d) {
    return d.accepted && d.edit_class != EditClass::kExactMatch;
  });
  if (!any_edit) return std::string(original);

  std::string out;
  auto emit = [&out](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  for (const auto& d : decisions) {
    switch (d.op.kind) {
      case EditKind::kMatch:
      case EditKind::kDel:
        emit(d.op.ref_token->surface);
        break;
      case EditKind::kSub:
        emit(d.accepted ? d.op.hyp_token->surface : d.op.ref_token->surface);
        break;
      case EditKind::kIns:
        if (d.accepted) emit(d.op.hyp_token->surface);
        break;
    }
  }
  return out;
}

RestorationOutcome restore_text(std::string_view original, std::string_view candidate,
                                double reject_threshold, bool caseless) {
  RestorationOutcome r;
  r.original = std::string(original);
  r.candidate = std::string(candidate);
  r.applied = r.original;

  const auto orig_tokens = tokenize(original, Unit::kWord);
  if (orig_tokens.empty()) {
    r.status = word_count(candidate) == 0 ? RestoreStatus::kAccepted : RestoreStatus::kRejectedNoChange;
    return r;
  }

  r.decisions = classify_edits(original, candidate, caseless);
  const std::string applied = apply_accepted(original, r.decisions);
  const auto applied_tokens = tokenize(applied, Unit::kWord);
  const auto cand_tokens = tokenize(candidate, Unit::kWord);
  r.residual_wer = static_cast<double>(edit_distance(applied_tokens, cand_tokens)) /
                   static_cast<double>(applied_tokens.size());

  if (r.residual_wer > reject_threshold) {
    r.status = RestoreStatus::kRejectedResidual;
    return r;
  }
  r.applied = applied;
  r.status = RestoreStatus::kAccepted;
  return r;
}

RestoredExample restore_example(const Example& example, std::string_view candidate,
                                double reject_threshold,
                                const std::optional<std::string>& src_candidate,
                                const LanguageConventions& conv) {
  RestoredExample out{example, {}, std::nullopt};
  const std::string& tgt_language =
      example.task == Task::kSt && example.target_language ? *example.target_language : example.language;
  out.outcome = restore_text(example.y_tgt, candidate, reject_threshold, conv.is_caseless(tgt_language));
  if (out.outcome.status != RestoreStatus::kAccepted) return out;

  out.example.y_tgt = out.outcome.applied;
  if (example.task == Task::kAsr) {
    out.example.y_src = out.outcome.applied;
  } else if (src_candidate) {
    out.src_outcome = restore_text(example.y_src, *src_candidate, reject_threshold,
                                   conv.is_caseless(example.language));
    if (out.src_outcome->status == RestoreStatus::kAccepted) out.example.y_src = out.src_outcome->applied;
  }
  return out;
}

std::size_t propagate_context(std::vector<Example>& examples,
                              const std::vector<std::string>& original_tgt) {
  const auto successors = chain_successors(examples);
  std::size_t rewritten = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!successors[i] || examples[i].y_tgt == original_tgt[i]) continue;
    Example& next = examples[*successors[i]];
    if (next.y_prev == original_tgt[i]) {
      next.y_prev = examples[i].y_tgt;
      ++rewritten;
    }
  }
  return rewritten;
}

}  // namespace s2tcurate
