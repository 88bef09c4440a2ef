/**
 * Copyright 2026 The R2Rec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef R2REC_ERRORS_HPP_
#define R2REC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace r2rec {

/// Base class for all r2rec errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration, missing/invalid options or parameters. CLI exit code 1.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Malformed or inconsistent data (input files, corpora, prompts). CLI exit code 2.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

/// Terminal model-endpoint failure (auth, retries exhausted). CLI exit code 3.
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& msg) : Error(msg) {}
};

/// Recoverable failure to extract structure from a model response.
/// Callers typically reject the sample or score it at worst rank.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace r2rec

#endif  // R2REC_ERRORS_HPP_
