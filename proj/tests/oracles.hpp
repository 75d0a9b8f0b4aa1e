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

// Reference implementations used only by the tests.  They are written
// independently of the library code: recursion instead of tables, linear
// scans instead of binary search, plain loops instead of accumulators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "s2tcurate/align.hpp"
#include "s2tcurate/longform.hpp"
#include "s2tcurate/textnorm.hpp"

namespace oracle {

using Words = std::vector<std::string>;

inline std::vector<s2tcurate::Token> tokens(const Words& w) {
  std::vector<s2tcurate::Token> out;
  for (const auto& s : w) out.push_back(s2tcurate::make_token(s));
  return out;
}

// Memoized recursive Levenshtein distance.
class Distance {
 public:
  Distance(const Words& a, const Words& b) : a_(a), b_(b), memo_((a.size() + 1) * (b.size() + 1), -1) {}

  int operator()(std::size_t i, std::size_t j) {
    int& m = memo_[i * (b_.size() + 1) + j];
    if (m >= 0) return m;
    if (i == 0) return m = static_cast<int>(j);
    if (j == 0) return m = static_cast<int>(i);
    const int cost = a_[i - 1] == b_[j - 1] ? 0 : 1;
    return m = std::min({(*this)(i - 1, j - 1) + cost, (*this)(i - 1, j) + 1, (*this)(i, j - 1) + 1});
  }

 private:
  const Words& a_;
  const Words& b_;
  std::vector<int> memo_;
};

struct Decomposition {
  std::size_t distance = 0, sub = 0, ins = 0, del = 0;
  bool operator==(const Decomposition&) const = default;
};

// Walks back from (n, m) preferring match, substitution, deletion, insertion.
inline Decomposition decompose(const Words& a, const Words& b) {
  Distance d(a, b);
  Decomposition out;
  out.distance = static_cast<std::size_t>(d(a.size(), b.size()));
  std::size_t i = a.size(), j = b.size();
  while (i > 0 || j > 0) {
    const int here = d(i, j);
    if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && d(i - 1, j - 1) == here) {
      --i, --j;
    } else if (i > 0 && j > 0 && a[i - 1] != b[j - 1] && d(i - 1, j - 1) + 1 == here) {
      ++out.sub, --i, --j;
    } else if (i > 0 && d(i - 1, j) + 1 == here) {
      ++out.del, --i;
    } else {
      ++out.ins, --j;
    }
  }
  return out;
}

// Enumerates every edit script turning a into b.  Returns the minimum cost
// and the (sub, ins, del) triples of all scripts reaching it.
struct Enumeration {
  std::size_t best = ~std::size_t{0};
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> optimal;
};

inline Enumeration enumerate_scripts(const Words& a, const Words& b) {
  Enumeration e;
  std::function<void(std::size_t, std::size_t, std::size_t, std::size_t, std::size_t)> walk =
      [&](std::size_t i, std::size_t j, std::size_t s, std::size_t ins, std::size_t del) {
        if (i == a.size() && j == b.size()) {
          const std::size_t cost = s + ins + del;
          if (cost < e.best) {
            e.best = cost;
            e.optimal.clear();
          }
          if (cost == e.best) e.optimal.insert({s, ins, del});
          return;
        }
        if (i < a.size() && j < b.size()) walk(i + 1, j + 1, s + (a[i] == b[j] ? 0 : 1), ins, del);
        if (i < a.size()) walk(i + 1, j, s, ins, del + 1);
        if (j < b.size()) walk(i, j + 1, s, ins + 1, del);
      };
  walk(0, 0, 0, 0, 0);
  return e;
}

inline Words random_words(std::mt19937& rng, std::size_t max_len, int alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  Words w(len(rng));
  for (auto& s : w) s = std::string(1, static_cast<char>('a' + sym(rng)));
  return w;
}

// Window cleanliness by direct scan: a consecutive gap above the tolerance,
// or any untranscribed segment intersecting the window span, makes it dirty.
inline bool window_clean(const s2tcurate::SegmentTimeline& t, const std::vector<std::string>& clip_ids,
                         double gap_tolerance) {
  std::vector<const s2tcurate::Segment*> clips;
  for (const auto& id : clip_ids) {
    for (const auto& s : t.segments) {
      if (s.segment_id == id) clips.push_back(&s);
    }
  }
  for (std::size_t k = 1; k < clips.size(); ++k) {
    if (clips[k]->start_sec - clips[k - 1]->end_sec > gap_tolerance) return false;
  }
  const double begin = clips.front()->start_sec;
  const double end = clips.back()->end_sec;
  for (const auto& s : t.segments) {
    if (!s.text && s.start_sec < end && s.end_sec > begin) return false;
  }
  return true;
}

// Random sorted timeline: contiguous-ish clips, some untranscribed, some
// gaps above the usual tolerance.
inline s2tcurate::SegmentTimeline random_timeline(std::mt19937& rng, std::size_t index) {
  s2tcurate::SegmentTimeline t;
  t.recording_id = "rec" + std::to_string(index);
  t.dataset = "synthetic";
  t.language = "eng";
  std::uniform_int_distribution<int> count(1, 30);
  std::uniform_real_distribution<double> dur(0.5, 12.0);
  std::uniform_real_distribution<double> gap(0.0, 1.2);
  std::bernoulli_distribution untranscribed(0.15);
  double cursor = 0.0;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    s2tcurate::Segment s;
    s.segment_id = t.recording_id + "-" + std::to_string(k);
    s.start_sec = cursor;
    s.end_sec = cursor + dur(rng);
    if (!untranscribed(rng)) s.text = "w" + std::to_string(k);
    cursor = s.end_sec + gap(rng);
    t.segments.push_back(std::move(s));
  }
  return t;
}

}  // namespace oracle
