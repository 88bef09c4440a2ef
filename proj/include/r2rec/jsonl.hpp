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
#ifndef R2REC_JSONL_HPP_
#define R2REC_JSONL_HPP_

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

namespace r2rec {

// ordered_json keeps insertion order, so file layouts match the documented
// schemas byte for byte.
using Json = nlohmann::ordered_json;

/// Serialized single-writer for line-delimited record files.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);

  void write(const Json& record);
  void flush();
  std::size_t lines_written() const { return lines_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t lines_ = 0;
};

/// Calls `fn(line_number, record)` for every non-empty line. Line numbers are
/// 1-based. Malformed JSON raises DataError naming the file and line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const Json&)>& fn);

/// Whole-file convenience for small inputs.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace r2rec

#endif  // R2REC_JSONL_HPP_
