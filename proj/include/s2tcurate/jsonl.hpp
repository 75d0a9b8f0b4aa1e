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

// Small helpers for the line-delimited JSON side files (hypotheses,
// candidates, decisions, audit logs).

#include <cstddef>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace s2tcurate {

// Calls fn(record, line_number) for each non-blank line.  Throws ParseError.
void for_each_jsonl(const std::string& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

struct IdText {
  std::string id;
  std::string text;
};

// Reads id/text pairs from either JSONL ({"id": ..., "text": ...}; "hyp",
// "hypothesis", "y_tgt" also accepted as the text key) or Kaldi-style
// "<id> <text>" lines.  Duplicate ids are a SchemaError.
std::vector<IdText> read_id_text(const std::string& path);

// Writes to `<path>.partial` and renames onto `path` on commit().  An
// uncommitted file stays as `.partial` so failed runs are easy to spot.
class OutputFile {
 public:
  explicit OutputFile(std::string path);
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;

  std::ostream& stream() { return out_; }
  void write_line(const std::string& line) { out_ << line << '\n'; }
  void commit();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string partial_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace s2tcurate
