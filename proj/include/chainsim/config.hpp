/*
 * Copyright 2026 The chainsim Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainsim/simulator.hpp"

namespace chainsim {

/// Flat `key = value` text; `#` starts a comment. Later keys override earlier ones.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
  /// Throws InvalidArgumentError if the file cannot be read.
  static ConfigFile load(const std::filesystem::path& path);

  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  /// Throws InvalidArgumentError naming the first key outside `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

std::uint64_t parse_uint(const std::string& text, const std::string& what);
/// Accepts plain byte counts or a K/M suffix (1024-based), e.g. "64K".
std::uint64_t parse_size(const std::string& text);
std::vector<std::uint64_t> parse_uint_list(const std::string& text, const std::string& what);
std::vector<std::uint64_t> parse_size_list(const std::string& text);

/// Keys understood by apply_sim_params.
const std::vector<std::string>& sim_param_keys();

/// Overrides fields of `base` from the file.
SimParams apply_sim_params(const ConfigFile& file, SimParams base = {});

std::string format_sim_params(const SimParams& params);

}  // namespace chainsim
