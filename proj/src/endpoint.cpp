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

#include "chainsim/endpoint.hpp"

#include <sstream>

#include "chainsim/error.hpp"

namespace chainsim {

std::string to_string(EndpointState s) {
  switch (s) {
    case EndpointState::idle: return "IDLE";
    case EndpointState::cfg_received: return "CFG_RECEIVED";
    case EndpointState::await_grant: return "AWAIT_GRANT";
    case EndpointState::granted: return "GRANTED";
    case EndpointState::recv_fwd_data: return "RECV_FWD_DATA";
    case EndpointState::await_finish: return "AWAIT_FINISH";
    case EndpointState::done: return "DONE";
  }
  return "?";
}

std::string to_string(EndpointMode m) {
  switch (m) {
    case EndpointMode::loopback: return "loopback";
    case EndpointMode::read: return "read";
    case EndpointMode::write: return "write";
    case EndpointMode::chainwrite: return "chainwrite";
  }
  return "?";
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::start: return "start";
    case EventKind::cfg: return "cfg";
    case EventKind::grant: return "grant";
    case EventKind::data: return "data";
    case EventKind::finish: return "finish";
    case EventKind::ready: return "ready";
  }
  return "?";
}

std::string to_string(ActionKind k) {
  switch (k) {
    case ActionKind::dispatch_cfg: return "dispatch_cfg";
    case ActionKind::send_grant: return "send_grant";
    case ActionKind::stream_data: return "stream_data";
    case ActionKind::forward_data: return "forward_data";
    case ActionKind::deliver_local: return "deliver_local";
    case ActionKind::send_finish: return "send_finish";
    case ActionKind::complete: return "complete";
  }
  return "?";
}

namespace {

class Stepper {
 public:
  Stepper(Endpoint ep, const EndpointEvent& ev) : ep_(std::move(ep)), ev_(ev) {}

  StepResult run() {
    if (ev_.kind == EventKind::ready) {
      on_ready();
    } else {
      switch (ep_.state) {
        case EndpointState::idle: on_idle(); break;
        case EndpointState::await_grant: on_await_grant(); break;
        case EndpointState::recv_fwd_data: on_data(); break;
        case EndpointState::await_finish: on_await_finish(); break;
        default: illegal();
      }
    }
    return StepResult{std::move(ep_), std::move(actions_), std::move(visited_)};
  }

 private:
  [[noreturn]] void illegal() const {
    std::ostringstream os;
    os << "endpoint " << ep_.node << " cannot accept '" << to_string(ev_.kind) << "' in state "
       << to_string(ep_.state);
    throw ProtocolError(os.str());
  }

  void enter(EndpointState s) {
    ep_.state = s;
    visited_.push_back(s);
  }

  void emit(ActionKind kind, NodeId peer, std::uint32_t bytes = 0) {
    actions_.push_back(Action{kind, peer, bytes});
  }

  const ChainNodeConfig& cfg() const { return *ep_.cfg; }

  void on_idle() {
    const bool start = ev_.kind == EventKind::start;
    if ((!start && ev_.kind != EventKind::cfg) || !ev_.cfg) illegal();
    const ChainNodeConfig& c = *ev_.cfg;
    if (c.node != ep_.node) {
      std::ostringstream os;
      os << "cfg for " << c.node << " delivered to " << ep_.node;
      throw ProtocolError(os.str());
    }
    if (start != (c.role == ChainRole::initiator)) illegal();
    if (c.role != ChainRole::tail && c.role != ChainRole::initiator && (!c.prev || !c.next)) illegal();
    if (c.role == ChainRole::tail && (!c.prev || c.next)) illegal();

    ep_.cfg = c;
    enter(EndpointState::cfg_received);

    switch (c.role) {
      case ChainRole::initiator:
        if (!c.next) {
          // Source and destination share the memory: no network phases.
          ep_.mode = EndpointMode::loopback;
          enter(EndpointState::granted);
          emit(ActionKind::stream_data, ep_.node, c.transfer_bytes);
          enter(EndpointState::recv_fwd_data);
        } else {
          emit(ActionKind::dispatch_cfg, ep_.node);
          enter(EndpointState::await_grant);
        }
        break;
      case ChainRole::middle:
        enter(EndpointState::await_grant);
        break;
      case ChainRole::tail:
        emit(ActionKind::send_grant, *c.prev);
        enter(EndpointState::recv_fwd_data);
        break;
    }
  }

  void on_await_grant() {
    if (ev_.kind != EventKind::grant) illegal();
    enter(EndpointState::granted);
    if (cfg().role == ChainRole::initiator) {
      emit(ActionKind::stream_data, *cfg().next, cfg().transfer_bytes);
      enter(EndpointState::await_finish);
    } else if (ep_.ready) {
      release_grant();
    }
    // else: Grant is held in GRANTED until the ready event arrives.
  }

  void on_ready() {
    ep_.ready = true;
    if (ep_.state == EndpointState::granted && ep_.cfg && cfg().role == ChainRole::middle) {
      release_grant();
    }
  }

  void release_grant() {
    emit(ActionKind::send_grant, *cfg().prev);
    enter(EndpointState::recv_fwd_data);
  }

  void on_data() {
    if (ev_.kind != EventKind::data || ev_.bytes == 0) illegal();
    if (ep_.bytes_received + ev_.bytes > cfg().transfer_bytes) {
      std::ostringstream os;
      os << "endpoint " << ep_.node << " received more than " << cfg().transfer_bytes << " bytes";
      throw ProtocolError(os.str());
    }
    ep_.bytes_received += ev_.bytes;
    emit(ActionKind::deliver_local, ep_.node, ev_.bytes);
    if (cfg().role == ChainRole::middle) {
      emit(ActionKind::forward_data, *cfg().next, ev_.bytes);
      ep_.bytes_forwarded += ev_.bytes;
    }
    if (ep_.bytes_received < cfg().transfer_bytes) return;

    switch (cfg().role) {
      case ChainRole::initiator:  // loopback
        emit(ActionKind::complete, ep_.node);
        enter(EndpointState::done);
        break;
      case ChainRole::middle:
        enter(EndpointState::await_finish);
        break;
      case ChainRole::tail:
        emit(ActionKind::send_finish, *cfg().prev);
        enter(EndpointState::done);
        break;
    }
  }

  void on_await_finish() {
    if (ev_.kind != EventKind::finish) illegal();
    if (cfg().role == ChainRole::initiator) {
      emit(ActionKind::complete, ep_.node);
    } else {
      emit(ActionKind::send_finish, *cfg().prev);
    }
    enter(EndpointState::done);
  }

  Endpoint ep_;
  const EndpointEvent& ev_;
  std::vector<Action> actions_;
  std::vector<EndpointState> visited_;
};

}  // namespace

StepResult step_endpoint(Endpoint ep, const EndpointEvent& event) {
  return Stepper(std::move(ep), event).run();
}

}  // namespace chainsim
