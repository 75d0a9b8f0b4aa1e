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

#include "s2tcurate/jsonl.hpp"

#include <cstdio>
#include <filesystem>
#include <unordered_set>

#include "s2tcurate/error.hpp"

namespace s2tcurate {

using nlohmann::json;

void for_each_jsonl(const std::string& path,
                    const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& err) {
      throw ParseError(path, line, text, std::string("malformed JSON (") + err.what() + ")");
    }
    fn(j, line);
  }
}

namespace {

bool looks_like_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string text;
  while (std::getline(in, text)) {
    const auto pos = text.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    return text[pos] == '{';
  }
  return true;
}

}  // namespace

std::vector<IdText> read_id_text(const std::string& path) {
  std::vector<IdText> out;
  std::unordered_set<std::string> seen;
  auto add = [&](IdText rec, std::size_t line) {
    if (!seen.insert(rec.id).second) throw SchemaError(path, line, "id", "duplicate id '" + rec.id + "'");
    out.push_back(std::move(rec));
  };

  if (looks_like_jsonl(path)) {
    for_each_jsonl(path, [&](const json& j, std::size_t line) {
      if (!j.is_object()) throw SchemaError(path, line, "<record>", "expected a JSON object");
      auto id = j.find("id");
      if (id == j.end() || !id->is_string()) throw SchemaError(path, line, "id", "missing or not a string");
      for (const char* key : {"text", "hyp", "hypothesis", "y_tgt"}) {
        auto t = j.find(key);
        if (t == j.end()) continue;
        if (!t->is_string()) throw SchemaError(path, line, key, "expected a string");
        add({id->get<std::string>(), t->get<std::string>()}, line);
        return;
      }
      throw SchemaError(path, line, "text", "missing required field");
    });
    return out;
  }

  std::ifstream in(path);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = text.find_first_of(" \t", begin);
    IdText rec;
    rec.id = text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    if (end != std::string::npos) {
      const auto t = text.find_first_not_of(" \t", end);
      if (t != std::string::npos) rec.text = text.substr(t);
    }
    add(std::move(rec), line);
  }
  return out;
}

OutputFile::OutputFile(std::string path)
    : path_(std::move(path)), partial_(path_ + ".partial"), out_(partial_, std::ios::binary) {
  if (!out_) throw DataError("cannot write '" + partial_ + "'");
}

void OutputFile::commit() {
  if (committed_) return;
  out_.flush();
  if (!out_) throw DataError("write failed for '" + partial_ + "'");
  out_.close();
  std::error_code ec;
  std::filesystem::rename(partial_, path_, ec);
  if (ec) throw DataError("cannot rename '" + partial_ + "' to '" + path_ + "': " + ec.message());
  committed_ = true;
}

}  // namespace s2tcurate
