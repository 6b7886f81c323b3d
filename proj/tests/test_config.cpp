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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "chainsim/config.hpp"
#include "chainsim/error.hpp"

using namespace chainsim;

TEST_CASE("config parsing") {
  const ConfigFile f = ConfigFile::parse(
      "# comment\n"
      "mesh = 4x5\n"
      "  hop_latency=2   # trailing comment\n"
      "\n"
      "sizes = 1K, 2K,64\n"
      "hop_latency = 3\n");
  CHECK(f.get("mesh") == "4x5");
  CHECK(f.get("hop_latency") == "3");
  CHECK(f.get("sizes") == "1K, 2K,64");
  CHECK_FALSE(f.get("seed").has_value());
  CHECK(f.has("mesh"));
  CHECK_THROWS_AS(ConfigFile::parse("novalue\n"), InvalidArgumentError);
  CHECK_THROWS_AS(ConfigFile::parse("= 3\n"), InvalidArgumentError);
  CHECK_THROWS_AS(f.require_known({"mesh", "sizes"}), InvalidArgumentError);
  CHECK_NOTHROW(f.require_known({"mesh", "sizes", "hop_latency"}));
}

TEST_CASE("number and size parsing") {
  CHECK(parse_uint("42", "x") == 42);
  CHECK_THROWS_AS(parse_uint("-1", "x"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_uint("4a", "x"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_uint("", "x"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_uint("99999999999999999999999", "x"), InvalidArgumentError);
  CHECK(parse_size("64") == 64);
  CHECK(parse_size("64K") == 65536);
  CHECK(parse_size("2k") == 2048);
  CHECK(parse_size("1M") == 1048576);
  CHECK_THROWS_AS(parse_size("K"), InvalidArgumentError);
  CHECK(parse_uint_list("1, 2,3", "g") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(parse_size_list("1K,128K") == std::vector<std::uint64_t>{1024, 131072});
  CHECK_THROWS_AS(parse_uint_list("1,,2", "g"), InvalidArgumentError);
}

TEST_CASE("sim params from a file") {
  const ConfigFile f = ConfigFile::parse("grant_proc_cycles = 3\nlink_bandwidth = 32\n");
  const SimParams p = apply_sim_params(f);
  CHECK(p.grant_proc_cycles == 3);
  CHECK(p.link_bandwidth == 32);
  CHECK(p.fwd_proc_cycles == SimParams{}.fwd_proc_cycles);
  CHECK_THROWS_AS(apply_sim_params(ConfigFile::parse("hop_latency = 99999999999\n")), InvalidArgumentError);

  const SimParams round = apply_sim_params(ConfigFile::parse(format_sim_params(p)));
  CHECK(round.grant_proc_cycles == 3);
  CHECK(round.link_bandwidth == 32);
  CHECK(sim_param_keys().size() == 9);
}

TEST_CASE("loading files") {
  const auto dir = std::filesystem::temp_directory_path() / "chainsim_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.cfg";
  std::ofstream(path) << "mesh = 8x8\n";
  CHECK(ConfigFile::load(path).get("mesh") == "8x8");
  CHECK_THROWS_AS(ConfigFile::load(dir / "missing.cfg"), InvalidArgumentError);
  std::filesystem::remove_all(dir);
}
