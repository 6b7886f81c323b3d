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

// Cfg images checked into tests/golden. Each entry lists the exact codec-dump
// arguments that produced the file and the cfg it must decode to, written out
// field by field.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "chainsim/protocol.hpp"

namespace golden {

struct Case {
  const char* file;
  unsigned link_width;
  const char* tool_args;
  chainsim::ChainNodeConfig cfg;
};

inline chainsim::ChainNodeConfig make(std::uint32_t node, std::optional<std::uint32_t> prev,
                                      std::optional<std::uint32_t> next, std::uint32_t initiator,
                                      chainsim::ChainRole role, std::uint32_t task, std::uint32_t bytes,
                                      chainsim::AccessPattern pattern) {
  chainsim::ChainNodeConfig c;
  c.node = chainsim::NodeId{node};
  if (prev) c.prev = chainsim::NodeId{*prev};
  if (next) c.next = chainsim::NodeId{*next};
  c.initiator = chainsim::NodeId{initiator};
  c.role = role;
  c.task_id = task;
  c.transfer_bytes = bytes;
  c.pattern = std::move(pattern);
  return c;
}

inline const std::vector<Case>& cases() {
  using chainsim::ChainRole;
  static const std::vector<Case> all = {
      {"middle_w512.bin", 512,
       "--mesh 8x8 --dests 3,7,21,63 --strategy naive --node 7 --bytes 65536 --link-width 512",
       make(7, 3, 21, 0, ChainRole::middle, 0, 65536, {0, {64}, {1024}})},
      {"middle_w64.bin", 64,
       "--mesh 8x8 --dests 3,7,21,63 --strategy naive --node 7 --bytes 65536 --link-width 64",
       make(7, 3, 21, 0, ChainRole::middle, 0, 65536, {0, {64}, {1024}})},
      {"tail_2d_w128.bin", 128,
       "--mesh 8x8 --dests 3,7,21,63 --strategy naive --node 63 --bytes 384 --link-width 128 "
       "--task-id 11259375 --base 100 --strides 64,8 --bounds 2,3",
       make(63, 21, std::nullopt, 0, ChainRole::tail, 0xABCDEF, 384, {100, {64, 8}, {2, 3}})},
      {"head_w256.bin", 256,
       "--mesh 4x5 --initiator 0 --dests 5,19 --strategy naive --node 0 --bytes 1024 --link-width 256",
       make(0, std::nullopt, 5, 0, ChainRole::initiator, 0, 1024, {0, {64}, {16}})},
  };
  return all;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace golden
