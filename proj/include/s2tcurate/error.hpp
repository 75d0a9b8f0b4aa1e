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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace s2tcurate {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kEndpoint = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Bad parameters: k outside [0,100], malformed prompt template, unknown stage.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kUsage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

// A line of a line-delimited file could not be parsed.
class ParseError : public DataError {
 public:
  ParseError(std::string path, std::size_t line, std::string content,
             const std::string& reason);

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }
  const std::string& content() const { return content_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string content_;
};

// A record parsed but violates the schema (missing field, wrong type,
// broken invariant).
class SchemaError : public DataError {
 public:
  SchemaError(std::string path, std::size_t line, std::string field,
              const std::string& reason);

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string field_;
};

class EndpointError : public Error {
 public:
  EndpointError(const std::string& what, bool transient)
      : Error(ExitCode::kEndpoint, what), transient_(transient) {}
  bool transient() const { return transient_; }

 private:
  bool transient_;
};

// The backend cannot score text (no log-prob support).
class FeatureUnavailable : public EndpointError {
 public:
  explicit FeatureUnavailable(const std::string& what) : EndpointError(what, false) {}
};

}  // namespace s2tcurate
