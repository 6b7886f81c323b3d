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
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "chainsim/endpoint.hpp"
#include "chainsim/protocol.hpp"
#include "chainsim/scheduling.hpp"
#include "chainsim/topology.hpp"

namespace chainsim {

using Cycle = std::uint64_t;

/// Timing model. Defaults put the per-destination chain overhead at 82 cycles on
/// chains whose every added destination is one hop further along a lattice path:
/// 4 * hop_latency + grant + fwd + finish = 4 + 26 + 26 + 26.
struct SimParams {
  std::uint32_t hop_latency = 1;         // cycles per link
  std::uint32_t link_bandwidth = 64;     // bytes per cycle, also the data frame size
  std::uint32_t cfg_frame_cycles = 8;    // to emit one cfg frame
  std::uint32_t grant_proc_cycles = 26;  // per follower before passing Grant on
  std::uint32_t fwd_proc_cycles = 26;    // per middle node, data cut-through
  std::uint32_t finish_proc_cycles = 26; // per follower before passing Finish on
  std::uint32_t unicast_setup_cycles = 20;
  std::uint32_t multicast_setup_base = 8;
  std::uint32_t multicast_setup_per_dst = 88;
  /// Middle nodes listed here hold Grant until the given cycle.
  std::map<NodeId, Cycle> busy_until;

  /// Throws InvalidArgumentError if link_bandwidth is zero.
  void validate() const;
  [[nodiscard]] unsigned link_width_bits() const noexcept { return link_bandwidth * 8; }
};

enum class TransferMechanism { unicast, multicast, chainwrite };

TransferMechanism parse_transfer_mechanism(const std::string& name);
std::string to_string(TransferMechanism m);

struct TransferTask {
  NodeId initiator;
  std::vector<NodeId> destinations;  // empty chainwrite = local loopback
  std::uint32_t bytes = 0;
  TransferMechanism mechanism = TransferMechanism::chainwrite;
  std::optional<ChainOrder> order;   // required for chainwrite with destinations
  std::optional<AccessPattern> pattern{};  // default: contiguous, one element per frame
  std::uint32_t task_id = 0;
};

struct PhaseCycles {
  Cycle cfg = 0;
  Cycle grant = 0;
  Cycle data = 0;
  Cycle finish = 0;

  [[nodiscard]] Cycle sum() const noexcept { return cfg + grant + data + finish; }
  bool operator==(const PhaseCycles&) const = default;
};

struct Delivery {
  NodeId node;
  Cycle completed = 0;           // cycle the last byte reached the node
  std::uint64_t bytes_received = 0;
  std::uint64_t bytes_forwarded = 0;

  bool operator==(const Delivery&) const = default;
};

struct StateTransition {
  Cycle cycle = 0;
  NodeId node;
  EndpointState from = EndpointState::idle;
  EndpointState to = EndpointState::idle;

  bool operator==(const StateTransition&) const = default;
};

struct TraceEntry {
  Cycle cycle = 0;
  NodeId node;
  std::string event;

  bool operator==(const TraceEntry&) const = default;
};

struct LatencyReport {
  TransferMechanism mechanism = TransferMechanism::chainwrite;
  Cycle total_cycles = 0;
  PhaseCycles phases;
  std::vector<Delivery> per_dest_delivery;  // chain order for chainwrite, id order otherwise
  std::uint64_t data_link_traversals = 0;   // data frames x links crossed
  std::uint64_t events_processed = 0;
  std::size_t cfg_frames = 0;               // frames per cfg packet
  std::vector<Endpoint> endpoints;          // final endpoint states, chain order (chainwrite)
  std::vector<StateTransition> transitions; // every FSM state change (chainwrite)
  std::vector<TraceEntry> trace;            // filled when tracing is on

  bool operator==(const LatencyReport&) const = default;
};

/// Deterministic discrete-event queue: events fire in (cycle, insertion) order.
class EventQueue {
 public:
  using Handler = std::function<void()>;

  void schedule(Cycle at, Handler handler);
  /// Runs until empty; throws DeadlockError after `max_events`.
  std::uint64_t run(std::uint64_t max_events);
  [[nodiscard]] Cycle now() const noexcept { return now_; }

 private:
  struct Item {
    Cycle at;
    std::uint64_t seq;
    Handler handler;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const noexcept {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  std::uint64_t seq_ = 0;
  Cycle now_ = 0;
};

struct SimOptions {
  bool trace = false;
};

/// Four-phase chain transfer: parallel cfg dispatch, Grant from tail to head,
/// cut-through data along the chain, Finish from tail to head.
LatencyReport run_chainwrite(const TransferTask& task, const MeshTopology& mesh,
                             const SimParams& params, const SimOptions& options = {});

/// Runs an explicit chain (initiator first). Throws ProtocolError when the
/// linked-list invariants are broken.
LatencyReport run_chain(const std::vector<ChainNodeConfig>& chain, const MeshTopology& mesh,
                        const SimParams& params, const SimOptions& options = {});

/// One P2P copy per destination, serialized at the source.
LatencyReport run_unicast(const TransferTask& task, const MeshTopology& mesh,
                          const SimParams& params, const SimOptions& options = {});

/// Router replication along the XY-route union.
LatencyReport run_multicast(const TransferTask& task, const MeshTopology& mesh,
                            const SimParams& params, const SimOptions& options = {});

LatencyReport simulate(const TransferTask& task, const MeshTopology& mesh, const SimParams& params,
                       const SimOptions& options = {});

/// Number of data frames for a transfer.
inline std::uint64_t frame_count(std::uint64_t bytes, std::uint32_t link_bandwidth) {
  return (bytes + link_bandwidth - 1) / link_bandwidth;
}

}  // namespace chainsim
