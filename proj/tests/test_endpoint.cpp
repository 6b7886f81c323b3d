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

#include <deque>
#include <random>

#include "chainsim/endpoint.hpp"
#include "chainsim/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace chainsim;
using testutil::ids;

namespace {

std::vector<ChainNodeConfig> chain_of(std::uint32_t bytes, std::initializer_list<std::uint32_t> order) {
  static const MeshTopology mesh(8, 8);
  const std::vector<NodeId> visit = ids(order);
  const DestinationSet task(NodeId{0}, visit, mesh);
  return build_chain_configs(task, ChainOrder{visit}, bytes, AccessPattern::contiguous(0, bytes, 64));
}

EndpointEvent cfg_event(const ChainNodeConfig& c) {
  return EndpointEvent{c.role == ChainRole::initiator ? EventKind::start : EventKind::cfg, c, 0};
}

}  // namespace

TEST_CASE("tail emits grant on cfg receipt") {
  const auto chain = chain_of(128, {1, 2});
  const StepResult r = step_endpoint(Endpoint{NodeId{2}}, cfg_event(chain[2]));
  CHECK(r.endpoint.state == EndpointState::recv_fwd_data);
  REQUIRE(r.actions.size() == 1);
  CHECK(r.actions[0] == Action{ActionKind::send_grant, NodeId{1}, 0});
  CHECK(r.visited == std::vector<EndpointState>{EndpointState::cfg_received, EndpointState::recv_fwd_data});
}

TEST_CASE("middle holds grant until ready") {
  const auto chain = chain_of(128, {1, 2});
  Endpoint ep{NodeId{1}};
  ep.ready = false;
  ep = step_endpoint(ep, cfg_event(chain[1])).endpoint;
  CHECK(ep.state == EndpointState::await_grant);

  StepResult r = step_endpoint(ep, EndpointEvent{EventKind::grant});
  CHECK(r.endpoint.state == EndpointState::granted);
  CHECK(r.actions.empty());

  r = step_endpoint(r.endpoint, EndpointEvent{EventKind::ready});
  CHECK(r.endpoint.state == EndpointState::recv_fwd_data);
  REQUIRE(r.actions.size() == 1);
  CHECK(r.actions[0] == Action{ActionKind::send_grant, NodeId{0}, 0});
}

TEST_CASE("middle duplicates and forwards data") {
  const auto chain = chain_of(128, {1, 2});
  Endpoint ep = step_endpoint(Endpoint{NodeId{1}}, cfg_event(chain[1])).endpoint;
  ep = step_endpoint(ep, EndpointEvent{EventKind::grant}).endpoint;
  StepResult r = step_endpoint(ep, EndpointEvent{EventKind::data, std::nullopt, 64});
  CHECK(r.endpoint.state == EndpointState::recv_fwd_data);
  CHECK(r.actions == std::vector<Action>{{ActionKind::deliver_local, NodeId{1}, 64},
                                         {ActionKind::forward_data, NodeId{2}, 64}});
  r = step_endpoint(r.endpoint, EndpointEvent{EventKind::data, std::nullopt, 64});
  CHECK(r.endpoint.state == EndpointState::await_finish);
  CHECK(r.endpoint.bytes_received == 128);
  CHECK(r.endpoint.bytes_forwarded == 128);
  CHECK_THROWS_AS(step_endpoint(r.endpoint, EndpointEvent{EventKind::data, std::nullopt, 64}), ProtocolError);
  r = step_endpoint(r.endpoint, EndpointEvent{EventKind::finish});
  CHECK(r.endpoint.state == EndpointState::done);
  CHECK(r.actions == std::vector<Action>{{ActionKind::send_finish, NodeId{0}, 0}});
}

TEST_CASE("illegal events are rejected") {
  const auto chain = chain_of(128, {1, 2});
  CHECK_THROWS_AS(step_endpoint(Endpoint{NodeId{1}}, EndpointEvent{EventKind::grant}), ProtocolError);
  CHECK_THROWS_AS(step_endpoint(Endpoint{NodeId{1}}, EndpointEvent{EventKind::data, std::nullopt, 64}),
                  ProtocolError);
  CHECK_THROWS_AS(step_endpoint(Endpoint{NodeId{1}}, cfg_event(chain[2])), ProtocolError);
  CHECK_THROWS_AS(step_endpoint(Endpoint{NodeId{0}}, EndpointEvent{EventKind::cfg, chain[0], 0}), ProtocolError);
  CHECK_THROWS_AS(step_endpoint(Endpoint{NodeId{1}}, EndpointEvent{EventKind::start, chain[1], 0}), ProtocolError);

  // Data before the grant phase completes.
  Endpoint mid = step_endpoint(Endpoint{NodeId{1}}, cfg_event(chain[1])).endpoint;
  CHECK_THROWS_AS(step_endpoint(mid, EndpointEvent{EventKind::data, std::nullopt, 64}), ProtocolError);
  CHECK_THROWS_AS(step_endpoint(mid, EndpointEvent{EventKind::finish}), ProtocolError);
  CHECK_THROWS_AS(step_endpoint(mid, cfg_event(chain[1])), ProtocolError);

  Endpoint tail = step_endpoint(Endpoint{NodeId{2}}, cfg_event(chain[2])).endpoint;
  CHECK_THROWS_AS(step_endpoint(tail, EndpointEvent{EventKind::data, std::nullopt, 0}), ProtocolError);
  CHECK_THROWS_AS(step_endpoint(tail, EndpointEvent{EventKind::data, std::nullopt, 256}), ProtocolError);
}

TEST_CASE("standalone initiator runs in loopback mode") {
  ChainNodeConfig c;
  c.node = NodeId{4};
  c.initiator = NodeId{4};
  c.role = ChainRole::initiator;
  c.transfer_bytes = 100;
  c.pattern = AccessPattern::contiguous(0, 100, 64);
  StepResult r = step_endpoint(Endpoint{NodeId{4}}, EndpointEvent{EventKind::start, c, 0});
  CHECK(r.endpoint.mode == EndpointMode::loopback);
  CHECK(r.endpoint.state == EndpointState::recv_fwd_data);
  r = step_endpoint(r.endpoint, EndpointEvent{EventKind::data, std::nullopt, 64});
  r = step_endpoint(r.endpoint, EndpointEvent{EventKind::data, std::nullopt, 36});
  CHECK(r.endpoint.state == EndpointState::done);
  CHECK(r.actions.back().kind == ActionKind::complete);
}

// Drives a whole chain through message passing with random delivery order among
// causally enabled messages and checks every state against the legal table.
TEST_CASE("random causal orderings keep every endpoint legal") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t bytes = 1 + static_cast<std::uint32_t>(rng() % 700);
    std::vector<std::uint32_t> pool = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % pool.size());
    const MeshTopology mesh(8, 8);
    const DestinationSet task(NodeId{0}, ids(pool), mesh);
    const auto chain =
        build_chain_configs(task, ChainOrder{ids(pool)}, bytes, AccessPattern::contiguous(0, bytes, 64));

    std::map<NodeId, Endpoint> eps;
    std::map<NodeId, std::vector<EndpointState>> seen;
    for (const auto& c : chain) {
      Endpoint ep{c.node};
      ep.ready = rng() % 3 != 0;
      eps.emplace(c.node, ep);
      seen[c.node] = {EndpointState::idle};
    }
    // Per-destination FIFO channels; a random channel delivers its head next.
    std::map<NodeId, std::deque<EndpointEvent>> inbox;
    inbox[chain[0].node].push_back(cfg_event(chain[0]));
    for (const auto& c : chain) {
      if (!eps[c.node].ready) inbox[c.node].push_back(EndpointEvent{EventKind::ready});
    }
    std::map<NodeId, std::deque<EndpointEvent>> deferred;  // cfg-dependent messages
    bool completed = false;
    int steps = 0;
    while (steps++ < 100000) {
      std::vector<NodeId> live;
      for (auto& [n, q] : inbox)
        if (!q.empty()) live.push_back(n);
      if (live.empty()) break;
      const NodeId n = live[rng() % live.size()];
      const EndpointEvent ev = inbox[n].front();
      inbox[n].pop_front();
      const StepResult r = step_endpoint(eps[n], ev);
      eps[n] = r.endpoint;
      for (auto s : r.visited) seen[n].push_back(s);
      for (const auto& a : r.actions) {
        switch (a.kind) {
          case ActionKind::dispatch_cfg:
            for (std::size_t i = 1; i < chain.size(); ++i) {
              auto& q = inbox[chain[i].node];
              q.push_front(cfg_event(chain[i]));
            }
            break;
          case ActionKind::send_grant: inbox[a.peer].push_back(EndpointEvent{EventKind::grant}); break;
          case ActionKind::stream_data: {
            std::uint32_t left = a.bytes;
            while (left > 0) {
              const std::uint32_t chunk = std::min<std::uint32_t>(left, 64);
              inbox[a.peer].push_back(EndpointEvent{EventKind::data, std::nullopt, chunk});
              left -= chunk;
            }
            break;
          }
          case ActionKind::forward_data:
            inbox[a.peer].push_back(EndpointEvent{EventKind::data, std::nullopt, a.bytes});
            break;
          case ActionKind::send_finish: inbox[a.peer].push_back(EndpointEvent{EventKind::finish}); break;
          case ActionKind::complete: completed = true; break;
          case ActionKind::deliver_local: break;
        }
      }
    }
    CHECK(completed);
    for (const auto& c : chain) {
      CAPTURE(c.node);
      CHECK(eps[c.node].state == EndpointState::done);
      CHECK(eps[c.node].bytes_forwarded <= eps[c.node].bytes_received);
      if (c.role != ChainRole::initiator) CHECK(eps[c.node].bytes_received == bytes);
      if (c.role == ChainRole::middle) CHECK(eps[c.node].bytes_forwarded == bytes);
      CHECK(seen[c.node] == oracle::legal_paths().at(c.role));
    }
  }
}
