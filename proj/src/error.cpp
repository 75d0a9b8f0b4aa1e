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

#include "s2tcurate/error.hpp"

#include <utility>

namespace s2tcurate {
namespace {

constexpr std::size_t kMaxQuoted = 200;

std::string clip(const std::string& s) {
  if (s.size() <= kMaxQuoted) return s;
  return s.substr(0, kMaxQuoted) + "...";
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line, std::string content,
                       const std::string& reason)
    : DataError(path + ":" + std::to_string(line) + ": " + reason + ": '" +
                clip(content) + "'"),
      path_(std::move(path)),
      line_(line),
      content_(std::move(content)) {}

SchemaError::SchemaError(std::string path, std::size_t line, std::string field,
                         const std::string& reason)
    : DataError(path + ":" + std::to_string(line) + ": field '" + field +
                "': " + reason),
      path_(std::move(path)),
      line_(line),
      field_(std::move(field)) {}

}  // namespace s2tcurate
