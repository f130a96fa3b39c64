// Copyright 2026 The lstext Authors. All Rights Reserved.
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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lstext {

// Flat UTF-8 "key = value" text. Blank lines and lines starting with '#'
// are ignored; keys and values are trimmed; a repeated key is an error.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>");
  // Throws IoError naming the file when it cannot be read.
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(std::string_view key) const { return values_.count(std::string(key)) != 0; }
  std::optional<std::string> get(std::string_view key) const;
  std::string get_string(std::string_view key, std::string fallback) const;
  double get_real(std::string_view key, double fallback) const;
  std::size_t get_count(std::string_view key, std::size_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  // Comma-separated list with empty items dropped; fallback when absent.
  std::vector<std::string> get_list(std::string_view key,
                                    std::vector<std::string> fallback = {}) const;

  // Throws ConfigError for any key outside `known`.
  void reject_unknown(const std::vector<std::string_view>& known) const;

  const std::string& source() const { return source_; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

}  // namespace lstext
