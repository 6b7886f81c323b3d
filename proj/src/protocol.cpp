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

#include "chainsim/protocol.hpp"

#include <map>
#include <sstream>

#include "chainsim/error.hpp"

namespace chainsim {

void AccessPattern::validate() const {
  if (strides.size() != bounds.size()) {
    throw InvalidArgumentError("access pattern strides and bounds differ in dimension");
  }
  if (strides.size() > 0xFF) {
    throw InvalidArgumentError("access pattern has more than 255 dimensions");
  }
  for (std::uint32_t b : bounds) {
    if (b == 0) throw InvalidArgumentError("access pattern bound must be at least 1");
  }
}

std::uint64_t AccessPattern::element_count() const {
  std::uint64_t n = 1;
  for (std::uint32_t b : bounds) n *= b;
  return n;
}

AccessPattern AccessPattern::contiguous(std::uint32_t base, std::uint32_t bytes,
                                        std::uint32_t element_bytes) {
  if (element_bytes == 0) throw InvalidArgumentError("element size must be positive");
  const std::uint32_t count = (bytes + element_bytes - 1) / element_bytes;
  return AccessPattern{base, {static_cast<std::int32_t>(element_bytes)}, {count == 0 ? 1 : count}};
}

std::vector<std::int64_t> gen_affine_addresses(const AccessPattern& pattern) {
  pattern.validate();
  const std::size_t dims = pattern.bounds.size();
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(pattern.element_count()));

  std::vector<std::uint32_t> idx(dims, 0);
  while (true) {
    std::int64_t addr = pattern.base;
    for (std::size_t i = 0; i < dims; ++i) {
      addr += static_cast<std::int64_t>(idx[i]) * pattern.strides[i];
    }
    out.push_back(addr);

    // Odometer increment, innermost (last) dimension first.
    std::size_t d = dims;
    while (d > 0) {
      --d;
      if (++idx[d] < pattern.bounds[d]) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (dims == 0) return out;
  }
}

std::string to_string(ChainRole r) {
  switch (r) {
    case ChainRole::initiator: return "initiator";
    case ChainRole::middle: return "middle";
    case ChainRole::tail: return "tail";
  }
  return "unknown";
}

std::vector<ChainNodeConfig> build_chain_configs(const DestinationSet& task, const ChainOrder& order,
                                                 std::uint32_t bytes, const AccessPattern& pattern,
                                                 std::uint32_t task_id) {
  return build_chain_configs(task, order, bytes,
                             std::vector<AccessPattern>(order.visit.size() + 1, pattern), task_id);
}

std::vector<ChainNodeConfig> build_chain_configs(const DestinationSet& task, const ChainOrder& order,
                                                 std::uint32_t bytes,
                                                 const std::vector<AccessPattern>& patterns,
                                                 std::uint32_t task_id) {
  if (!is_permutation_of(order, task)) {
    throw InvalidArgumentError("chain order is not a permutation of the destination set");
  }
  if (patterns.size() != order.visit.size() + 1) {
    throw InvalidArgumentError("need one access pattern per chain node");
  }
  if (task_id >= (1U << 24)) {
    throw InvalidArgumentError("task id does not fit in 24 bits");
  }
  for (const auto& p : patterns) p.validate();

  std::vector<NodeId> nodes{task.initiator()};
  nodes.insert(nodes.end(), order.visit.begin(), order.visit.end());

  std::vector<ChainNodeConfig> chain;
  chain.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ChainNodeConfig cfg;
    cfg.node = nodes[i];
    if (i > 0) cfg.prev = nodes[i - 1];
    if (i + 1 < nodes.size()) cfg.next = nodes[i + 1];
    cfg.initiator = task.initiator();
    cfg.role = i == 0 ? ChainRole::initiator
               : i + 1 == nodes.size() ? ChainRole::tail
                                       : ChainRole::middle;
    cfg.task_id = task_id;
    cfg.transfer_bytes = bytes;
    cfg.pattern = patterns[i];
    chain.push_back(std::move(cfg));
  }
  return chain;
}

void validate_chain(const std::vector<ChainNodeConfig>& chain) {
  auto fail = [](const std::string& msg) { throw ProtocolError("malformed chain: " + msg); };
  if (chain.size() < 2) fail("a chain needs an initiator and at least one follower");

  std::map<NodeId, const ChainNodeConfig*> by_node;
  for (const auto& cfg : chain) {
    if (!by_node.emplace(cfg.node, &cfg).second) fail("node appears twice");
  }

  const ChainNodeConfig* head = nullptr;
  for (const auto& cfg : chain) {
    if (cfg.role == ChainRole::initiator) {
      if (head != nullptr) fail("more than one initiator");
      head = &cfg;
    }
  }
  if (head == nullptr) fail("no initiator");
  if (head->prev) fail("initiator has a predecessor");

  std::size_t visited = 1;
  const ChainNodeConfig* cur = head;
  while (cur->next) {
    auto it = by_node.find(*cur->next);
    if (it == by_node.end()) fail("next pointer leaves the chain");
    const ChainNodeConfig* nxt = it->second;
    if (nxt->prev != cur->node) fail("prev pointer does not mirror next pointer");
    if (nxt->initiator != head->node) fail("inconsistent initiator");
    if (nxt->task_id != head->task_id) fail("inconsistent task id");
    if (nxt->transfer_bytes != head->transfer_bytes) fail("inconsistent transfer size");
    if (++visited > chain.size()) fail("cycle in next pointers");
    cur = nxt;
  }
  if (visited != chain.size()) fail("not every node is reachable from the initiator");
  if (cur->role != ChainRole::tail) fail("last node is not marked tail");
  for (const auto& cfg : chain) {
    if (cfg.role == ChainRole::middle && (!cfg.prev || !cfg.next)) fail("middle node lacks a link");
    if (cfg.role == ChainRole::tail && (cfg.next || !cfg.prev)) fail("tail has bad links");
  }
}

}  // namespace chainsim
