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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chainsim/cli.hpp"

using namespace chainsim;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "chainsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::string data_file(const char* name) { return std::string(CHAINSIM_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("route") {
  Run r = cli({"route", "--mesh", "8x8", "--src", "0", "--dst", "63"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "hops: 14"));
  r = cli({"route", "--mesh", "8x8", "--src", "5", "--dst", "5"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "hops: 0"));
  CHECK(has(r.out, "(empty)"));
  r = cli({"route", "--mesh", "8x8", "--src", "0", "--dst", "99"});
  CHECK(r.code == kExitRuntime);
  CHECK(has(r.err, "99"));
}

TEST_CASE("schedule") {
  Run r = cli({"schedule", "--mesh", "4x4", "--initiator", "0", "--dests", "3,12,15", "--strategy", "tsp-exact"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "total hops: 9"));
  r = cli({"schedule", "--mesh", "8x8", "--dests", "21,3,7", "--strategy", "naive"});
  CHECK(has(r.out, "C0 -> C3 -> C7 -> C21"));
  r = cli({"schedule", "--mesh", "4x4", "--dests", "3,12,15", "--strategy", "greedy"});
  CHECK(has(r.out, "C0 -> C3 -> C15 -> C12"));
  r = cli({"schedule", "--mesh", "8x8", "--dests", "7,9,63", "--strategy", "greedy", "--greedy-start", "closest"});
  CHECK(has(r.out, "C0 -> C9"));

  std::string many;
  for (int i = 1; i <= 20; ++i) many += (i > 1 ? "," : "") + std::to_string(i);
  r = cli({"schedule", "--mesh", "8x8", "--dests", many, "--strategy", "tsp-exact"});
  CHECK(r.code == kExitRuntime);
  CHECK(has(r.err, "tsp-heuristic"));
  r = cli({"schedule", "--mesh", "8x8", "--dests", many, "--strategy", "tsp-heuristic"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"route", "--mesh", "8x8", "--src", "0"}).code == kExitUsage);
  CHECK(cli({"route", "--mesh", "8x8", "--src", "0", "--dst", "1", "--bogus", "1"}).code == kExitUsage);
  CHECK(cli({"teleport"}).code == kExitUsage);
  CHECK(cli({"route", "--mesh", "8x8", "--src", "x", "--dst", "1"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("simulate") {
  Run r = cli({"simulate", "--config", data_file("unit.cfg"), "--mechanism", "chainwrite", "--size", "64",
               "--dests", "1"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "total cycles: 8"));
  CHECK(has(r.out, "phases: cfg=2 grant=2 data=2 finish=2"));

  r = cli({"simulate", "--mechanism", "unicast", "--size", "64K", "--dests", "9,18,27", "--mesh", "8x8"});
  CHECK(r.code == kExitOk);
  const auto pos = r.out.find("eta: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 5)) <= 1.0);

  r = cli({"simulate", "--config", "/nonexistent/file.cfg", "--dests", "1"});
  CHECK(r.code == kExitRuntime);

  r = cli({"simulate", "--size", "1K", "--dests", "1,2", "--mesh", "4x4", "--trace"});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "trace:"));
  CHECK(has(r.out, "grant"));

  r = cli({"simulate", "--size", "0", "--dests", "1"});
  CHECK(r.code == kExitRuntime);
}

TEST_CASE("simulate picks up the environment config") {
  ::setenv(kConfigEnvVar, data_file("unit.cfg").c_str(), 1);
  const Run r = cli({"simulate", "--size", "64", "--dests", "1"});
  ::unsetenv(kConfigEnvVar);
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "total cycles: 8"));
}

TEST_CASE("codec-dump writes and reads images") {
  const auto dir = std::filesystem::temp_directory_path() / "chainsim_cli_codec";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "c.bin").string();
  Run r = cli({"codec-dump", "--mesh", "8x8", "--dests", "3,7,21,63", "--node", "7", "--link-width", "64",
               "--out", path});
  CHECK(r.code == kExitOk);
  CHECK(has(r.out, "frames: 5 x 64 bits"));
  const Run back = cli({"codec-dump", "--file", path, "--target", "7"});
  CHECK(back.code == kExitOk);
  CHECK(has(back.out, "A prev:      C3"));
  CHECK(has(back.out, "B next:      C21"));
  CHECK(cli({"codec-dump", "--mesh", "8x8", "--dests", "3", "--node", "9"}).code == kExitRuntime);
  CHECK(cli({"codec-dump", "--file", (dir / "none.bin").string()}).code == kExitRuntime);
  CHECK(cli({"codec-dump"}).code == kExitRuntime);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment") {
  const auto dir = std::filesystem::temp_directory_path() / "chainsim_cli_exp";
  std::filesystem::remove_all(dir);
  const Run a = cli({"experiment", "--name", "hops", "--config", data_file("hops_small.cfg"), "--out",
                     (dir / "a").string()});
  CHECK(a.code == kExitOk);
  for (const char* m : {"unicast", "multicast", "chain_naive", "chain_greedy", "chain_tsp"}) CHECK(has(a.out, m));
  const Run b = cli({"experiment", "--name", "hops", "--config", data_file("hops_small.cfg"), "--out",
                     (dir / "b").string(), "--threads", "1"});
  CHECK(b.code == kExitOk);
  CHECK(slurp(dir / "a" / "hops.csv") == slurp(dir / "b" / "hops.csv"));
  CHECK(has(slurp(dir / "a" / "hops_config.txt"), "seed = 7"));

  const Run o = cli({"experiment", "--name", "overhead", "--out", (dir / "o").string()});
  CHECK(o.code == kExitOk);
  CHECK(has(o.out, "slope = 82"));

  CHECK(cli({"experiment", "--name", "energy"}).code == kExitRuntime);
  CHECK(cli({"experiment", "--name", "overhead", "--config", data_file("hops_small.cfg")}).code == kExitRuntime);
  std::filesystem::remove_all(dir);
}
