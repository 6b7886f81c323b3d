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

#include "chainsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "chainsim/error.hpp"

namespace chainsim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile file;
  file.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgumentError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw InvalidArgumentError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    file.values_[key] = trim(line.substr(eq + 1));
  }
  return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ConfigFile::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgumentError(origin_ + ": unknown key '" + key + "'");
    }
  }
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw InvalidArgumentError(what + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_size(const std::string& text) {
  std::string t = trim(text);
  std::uint64_t scale = 1;
  if (!t.empty() && (t.back() == 'K' || t.back() == 'k')) {
    scale = 1024;
    t.pop_back();
  } else if (!t.empty() && (t.back() == 'M' || t.back() == 'm')) {
    scale = 1024 * 1024;
    t.pop_back();
  }
  return parse_uint(t, "size") * scale;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) parts.push_back(trim(part));
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  if (parts.size() == 1 && parts.front().empty()) parts.clear();
  for (const auto& p : parts) {
    if (p.empty()) throw InvalidArgumentError("empty item in list '" + text + "'");
  }
  return parts;
}

}  // namespace

std::vector<std::uint64_t> parse_uint_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split_list(text)) out.push_back(parse_uint(part, what));
  if (out.empty()) throw InvalidArgumentError(what + ": list is empty");
  return out;
}

std::vector<std::uint64_t> parse_size_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split_list(text)) out.push_back(parse_size(part));
  if (out.empty()) throw InvalidArgumentError("sizes: list is empty");
  return out;
}

namespace {

struct ParamField {
  const char* key;
  std::uint32_t SimParams::*field;
};

constexpr ParamField kParamFields[] = {
    {"hop_latency", &SimParams::hop_latency},
    {"link_bandwidth", &SimParams::link_bandwidth},
    {"cfg_frame_cycles", &SimParams::cfg_frame_cycles},
    {"grant_proc_cycles", &SimParams::grant_proc_cycles},
    {"fwd_proc_cycles", &SimParams::fwd_proc_cycles},
    {"finish_proc_cycles", &SimParams::finish_proc_cycles},
    {"unicast_setup_cycles", &SimParams::unicast_setup_cycles},
    {"multicast_setup_base", &SimParams::multicast_setup_base},
    {"multicast_setup_per_dst", &SimParams::multicast_setup_per_dst},
};

}  // namespace

const std::vector<std::string>& sim_param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : kParamFields) k.emplace_back(f.key);
    return k;
  }();
  return keys;
}

SimParams apply_sim_params(const ConfigFile& file, SimParams base) {
  for (const auto& f : kParamFields) {
    if (auto v = file.get(f.key)) {
      const std::uint64_t value = parse_uint(*v, f.key);
      if (value > 0xFFFFFFFFULL) throw InvalidArgumentError(std::string(f.key) + " is too large");
      base.*f.field = static_cast<std::uint32_t>(value);
    }
  }
  base.validate();
  return base;
}

std::string format_sim_params(const SimParams& params) {
  std::ostringstream os;
  for (const auto& f : kParamFields) os << f.key << " = " << params.*f.field << '\n';
  return os.str();
}

}  // namespace chainsim
