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
#include <optional>
#include <string>
#include <vector>

#include "chainsim/scheduling.hpp"
#include "chainsim/topology.hpp"

namespace chainsim {

/// ND-affine access pattern: address = base + sum(idx[i] * strides[i]),
/// idx iterated lexicographically with the last dimension fastest.
struct AccessPattern {
  std::uint32_t base = 0;
  std::vector<std::int32_t> strides;
  std::vector<std::uint32_t> bounds;

  bool operator==(const AccessPattern&) const = default;

  /// Throws InvalidArgumentError on mismatched dimensions or zero bounds.
  void validate() const;
  [[nodiscard]] std::uint64_t element_count() const;

  /// Contiguous 1-D pattern covering `bytes` in `element_bytes` units.
  static AccessPattern contiguous(std::uint32_t base, std::uint32_t bytes,
                                  std::uint32_t element_bytes);
};

std::vector<std::int64_t> gen_affine_addresses(const AccessPattern& pattern);

enum class ChainRole : std::uint8_t { initiator = 1, middle = 2, tail = 3 };

std::string to_string(ChainRole r);

/// One entry of the doubly linked chain as seen by a single endpoint.
struct ChainNodeConfig {
  NodeId node;
  std::optional<NodeId> prev;
  std::optional<NodeId> next;
  NodeId initiator;
  ChainRole role = ChainRole::initiator;
  std::uint32_t task_id = 0;  // 24 bits on the wire
  std::uint32_t transfer_bytes = 0;
  AccessPattern pattern;

  bool operator==(const ChainNodeConfig&) const = default;
};

/// Returns initiator first, then followers in visit order. Every follower gets the
/// same pattern; distinct per-node layouts go through the overload below.
std::vector<ChainNodeConfig> build_chain_configs(const DestinationSet& task, const ChainOrder& order,
                                                 std::uint32_t bytes, const AccessPattern& pattern,
                                                 std::uint32_t task_id = 0);

/// patterns[0] belongs to the initiator, patterns[i] to order.visit[i-1].
std::vector<ChainNodeConfig> build_chain_configs(const DestinationSet& task, const ChainOrder& order,
                                                 std::uint32_t bytes,
                                                 const std::vector<AccessPattern>& patterns,
                                                 std::uint32_t task_id = 0);

/// Checks the linked-list invariants; throws ProtocolError describing the first violation.
void validate_chain(const std::vector<ChainNodeConfig>& chain);

}  // namespace chainsim
