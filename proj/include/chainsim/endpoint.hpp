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

#include "chainsim/protocol.hpp"

namespace chainsim {

enum class EndpointState {
  idle,
  cfg_received,
  await_grant,
  granted,
  recv_fwd_data,
  await_finish,
  done,
};

enum class EndpointMode { loopback, read, write, chainwrite };

std::string to_string(EndpointState s);
std::string to_string(EndpointMode m);

/// Per-node protocol automaton of a chain transfer.
struct Endpoint {
  NodeId node;
  EndpointState state = EndpointState::idle;
  EndpointMode mode = EndpointMode::chainwrite;
  std::optional<ChainNodeConfig> cfg{};
  std::uint64_t bytes_received = 0;
  std::uint64_t bytes_forwarded = 0;
  bool ready = true;  // false while busy with an earlier task; holds Grant

  bool operator==(const Endpoint&) const = default;
};

enum class EventKind {
  start,   // initiator: task handed over by the local core
  cfg,     // follower: cfg packet decoded
  grant,
  data,    // one data frame of `bytes`
  finish,
  ready,   // endpoint became free for the new task
};

std::string to_string(EventKind k);

struct EndpointEvent {
  EventKind kind = EventKind::start;
  std::optional<ChainNodeConfig> cfg{};  // start and cfg events
  std::uint32_t bytes = 0;             // data events
};

enum class ActionKind {
  dispatch_cfg,   // send cfgs to every follower
  send_grant,     // to peer, after grant processing
  stream_data,    // initiator starts streaming `bytes` to peer
  forward_data,   // one frame of `bytes` to peer
  deliver_local,  // `bytes` written to local memory
  send_finish,    // to peer, after finish processing
  complete,       // initiator observed the end of the task
};

std::string to_string(ActionKind k);

struct Action {
  ActionKind kind;
  NodeId peer;
  std::uint32_t bytes = 0;

  bool operator==(const Action&) const = default;
};

struct StepResult {
  Endpoint endpoint;
  std::vector<Action> actions;
  std::vector<EndpointState> visited;  // every state entered, in order
};

/// Pure transition function. Throws ProtocolError on an event that is illegal in
/// the endpoint's current state.
StepResult step_endpoint(Endpoint ep, const EndpointEvent& event);

}  // namespace chainsim
