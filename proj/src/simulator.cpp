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

#include "chainsim/simulator.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "chainsim/codec.hpp"
#include "chainsim/error.hpp"
#include "chainsim/multicast.hpp"

namespace chainsim {

void SimParams::validate() const {
  if (link_bandwidth == 0) throw InvalidArgumentError("link_bandwidth must be positive");
}

TransferMechanism parse_transfer_mechanism(const std::string& name) {
  if (name == "unicast") return TransferMechanism::unicast;
  if (name == "multicast") return TransferMechanism::multicast;
  if (name == "chainwrite") return TransferMechanism::chainwrite;
  throw InvalidArgumentError("unknown mechanism '" + name +
                             "' (expected unicast, multicast or chainwrite)");
}

std::string to_string(TransferMechanism m) {
  switch (m) {
    case TransferMechanism::unicast: return "unicast";
    case TransferMechanism::multicast: return "multicast";
    case TransferMechanism::chainwrite: return "chainwrite";
  }
  return "unknown";
}

void EventQueue::schedule(Cycle at, Handler handler) {
  queue_.push(Item{std::max(at, now_), seq_++, std::move(handler)});
}

std::uint64_t EventQueue::run(std::uint64_t max_events) {
  std::uint64_t processed = 0;
  while (!queue_.empty()) {
    if (processed == max_events) {
      std::ostringstream os;
      os << "event bound of " << max_events << " exceeded at cycle " << now_;
      throw DeadlockError(os.str());
    }
    Item item = queue_.top();
    queue_.pop();
    now_ = item.at;
    item.handler();
    ++processed;
  }
  return processed;
}

namespace {

std::string link_label(const DirectedLink& l) {
  std::ostringstream os;
  os << "link " << l.from << "->" << l.to;
  return os.str();
}

// Contention-free hop-by-hop transport shared by all three mechanisms.
class Network {
 public:
  Network(const MeshTopology& mesh, const SimParams& params, const SimOptions& options,
          LatencyReport& report)
      : mesh_(mesh), params_(params), options_(options), report_(report) {}

  EventQueue& queue() noexcept { return queue_; }
  Cycle now() const noexcept { return queue_.now(); }
  bool tracing() const noexcept { return options_.trace; }

  void log(NodeId node, std::string what) {
    if (options_.trace) report_.trace.push_back({now(), node, std::move(what)});
  }

  /// Departs `from` at `depart`, crosses every XY link, then runs `arrive` at `to`.
  void send(NodeId from, NodeId to, Cycle depart, const char* kind, bool is_data,
            std::function<void()> arrive) {
    auto route = route_for(from, to);
    if (route->empty()) {
      queue_.schedule(depart, std::move(arrive));
      return;
    }
    hop(std::move(route), 0, depart, kind, is_data, std::move(arrive));
  }

  /// Crosses a single link, for tree-shaped traffic.
  void cross(const DirectedLink& link, Cycle depart, const char* kind, bool is_data,
             std::function<void()> arrive) {
    queue_.schedule(depart + params_.hop_latency, [this, link, kind, is_data, arrive = std::move(arrive)] {
      if (is_data) ++report_.data_link_traversals;
      if (options_.trace) log(link.to, link_label(link) + " " + kind);
      arrive();
    });
  }

 private:
  std::shared_ptr<const RoutePath> route_for(NodeId from, NodeId to) {
    auto [it, inserted] = routes_.try_emplace(DirectedLink{from, to});
    if (inserted) it->second = std::make_shared<const RoutePath>(xy_route(from, to, mesh_));
    return it->second;
  }

  void hop(std::shared_ptr<const RoutePath> route, std::size_t i, Cycle depart, const char* kind,
           bool is_data, std::function<void()> arrive) {
    queue_.schedule(depart + params_.hop_latency,
                    [this, route = std::move(route), i, kind, is_data, arrive = std::move(arrive)]() mutable {
                      const DirectedLink& link = route->links[i];
                      if (is_data) ++report_.data_link_traversals;
                      if (options_.trace) log(link.to, link_label(link) + " " + kind);
                      if (i + 1 < route->hops()) {
                        hop(std::move(route), i + 1, now(), kind, is_data, std::move(arrive));
                      } else {
                        arrive();
                      }
                    });
  }

  const MeshTopology& mesh_;
  const SimParams& params_;
  const SimOptions& options_;
  LatencyReport& report_;
  EventQueue queue_;
  std::map<DirectedLink, std::shared_ptr<const RoutePath>> routes_;
};

std::uint64_t event_bound(std::uint64_t messages, const MeshTopology& mesh) {
  return messages * static_cast<std::uint64_t>(mesh.x_dim() + mesh.y_dim() + 2) + 64;
}

class ChainRun {
 public:
  ChainRun(const std::vector<ChainNodeConfig>& chain, const MeshTopology& mesh,
           const SimParams& params, const SimOptions& options)
      : chain_(chain), mesh_(mesh), params_(params), report_(), net_(mesh, params, options, report_) {
    report_.mechanism = TransferMechanism::chainwrite;
    for (const auto& cfg : chain_) {
      node_to_coord(cfg.node, mesh_);
      Endpoint ep{cfg.node};
      if (auto it = params_.busy_until.find(cfg.node); it != params_.busy_until.end() && it->second > 0) {
        ep.ready = false;
      }
      endpoints_.emplace(cfg.node, std::move(ep));
    }
  }

  LatencyReport run() {
    const ChainNodeConfig& head = chain_.front();
    const std::uint64_t frames = frame_count(head.transfer_bytes, params_.link_bandwidth);
    const std::uint64_t followers = chain_.size() - 1;
    report_.cfg_frames = followers == 0 ? 0 : cfg_frame_count(head.pattern.strides.size(), params_.link_width_bits());

    for (const auto& [node, until] : params_.busy_until) {
      if (endpoints_.contains(node) && until > 0) {
        net_.queue().schedule(until, [this, node = node] { deliver(node, EndpointEvent{EventKind::ready}); });
      }
    }
    net_.queue().schedule(0, [this, &head] { deliver(head.node, EndpointEvent{EventKind::start, head}); });

    const std::uint64_t messages = 4 * followers + frames * std::max<std::uint64_t>(followers, 1) +
                                   params_.busy_until.size() + 1;
    report_.events_processed = net_.queue().run(event_bound(messages, mesh_));

    for (const auto& cfg : chain_) {
      const Endpoint& ep = endpoints_.at(cfg.node);
      if (ep.state != EndpointState::done) {
        std::ostringstream os;
        os << "event queue drained with " << cfg.node << " in state " << to_string(ep.state);
        throw DeadlockError(os.str());
      }
      report_.endpoints.push_back(ep);
      if (cfg.role != ChainRole::initiator) {
        report_.per_dest_delivery.push_back(
            Delivery{cfg.node, last_delivery_[cfg.node], ep.bytes_received, ep.bytes_forwarded});
      }
    }

    report_.total_cycles = finish_end_;
    if (followers == 0) {
      report_.phases = PhaseCycles{0, 0, finish_end_, 0};
    } else {
      report_.phases = PhaseCycles{cfg_end_, grant_end_ - cfg_end_, data_end_ - grant_end_,
                                   finish_end_ - data_end_};
    }
    return std::move(report_);
  }

 private:
  void deliver(NodeId node, const EndpointEvent& event) {
    Endpoint& ep = endpoints_.at(node);
    const EndpointState before = ep.state;
    StepResult step = step_endpoint(ep, event);

    EndpointState from = before;
    for (EndpointState s : step.visited) {
      report_.transitions.push_back({net_.now(), node, from, s});
      from = s;
    }
    if (net_.tracing()) {
      std::string what = "recv " + to_string(event.kind);
      if (event.kind == EventKind::data) what += " " + std::to_string(event.bytes) + "B";
      if (step.endpoint.state != before) what += " [" + to_string(before) + " -> " + to_string(step.endpoint.state) + "]";
      net_.log(node, std::move(what));
    }
    ep = std::move(step.endpoint);

    const ChainNodeConfig& cfg = *ep.cfg;
    if (event.kind == EventKind::cfg) cfg_end_ = std::max(cfg_end_, net_.now());
    if (event.kind == EventKind::grant && cfg.role == ChainRole::initiator) grant_end_ = net_.now();
    if (cfg.role == ChainRole::tail && ep.bytes_received == cfg.transfer_bytes && event.kind == EventKind::data) {
      data_end_ = net_.now();
    }

    for (const Action& a : step.actions) perform(node, a);
  }

  void perform(NodeId node, const Action& a) {
    const Cycle now = net_.now();
    switch (a.kind) {
      case ActionKind::dispatch_cfg:
        for (std::size_t i = 1; i < chain_.size(); ++i) {
          const ChainNodeConfig& follower = chain_[i];
          auto packet = std::make_shared<const CfgPacket>(encode_cfg(follower, params_.link_width_bits()));
          const Cycle depart = now + packet->frames.size() * params_.cfg_frame_cycles;
          net_.send(node, follower.node, depart, "cfg", false, [this, packet] {
            deliver(packet->target, EndpointEvent{EventKind::cfg, decode_cfg(*packet)});
          });
        }
        break;
      case ActionKind::send_grant:
        net_.send(node, a.peer, now + params_.grant_proc_cycles, "grant", false,
                  [this, peer = a.peer] { deliver(peer, EndpointEvent{EventKind::grant}); });
        break;
      case ActionKind::stream_data: {
        std::uint64_t left = a.bytes;
        for (Cycle k = 1; left > 0; ++k) {
          const auto chunk = static_cast<std::uint32_t>(std::min<std::uint64_t>(left, params_.link_bandwidth));
          left -= chunk;
          net_.send(node, a.peer, now + k, "data", a.peer != node,
                    [this, peer = a.peer, chunk] { deliver(peer, EndpointEvent{EventKind::data, std::nullopt, chunk}); });
        }
        break;
      }
      case ActionKind::forward_data:
        net_.send(node, a.peer, now + params_.fwd_proc_cycles, "data", true,
                  [this, peer = a.peer, bytes = a.bytes] {
                    deliver(peer, EndpointEvent{EventKind::data, std::nullopt, bytes});
                  });
        break;
      case ActionKind::deliver_local:
        last_delivery_[node] = now;
        break;
      case ActionKind::send_finish:
        net_.send(node, a.peer, now + params_.finish_proc_cycles, "finish", false,
                  [this, peer = a.peer] { deliver(peer, EndpointEvent{EventKind::finish}); });
        break;
      case ActionKind::complete:
        finish_end_ = now;
        break;
    }
  }

  const std::vector<ChainNodeConfig>& chain_;
  const MeshTopology& mesh_;
  const SimParams& params_;
  LatencyReport report_;
  Network net_;
  std::map<NodeId, Endpoint> endpoints_;
  std::map<NodeId, Cycle> last_delivery_;
  Cycle cfg_end_ = 0;
  Cycle grant_end_ = 0;
  Cycle data_end_ = 0;
  Cycle finish_end_ = 0;
};

void check_task(const TransferTask& task, const MeshTopology& mesh, bool allow_empty) {
  if (task.bytes == 0) throw InvalidArgumentError("transfer size must be positive");
  if (!mesh.contains(task.initiator)) {
    std::ostringstream os;
    os << "initiator " << task.initiator << " is outside the " << mesh.to_string() << " mesh";
    throw InvalidNodeError(os.str());
  }
  if (task.destinations.empty() && !allow_empty) {
    throw InvalidArgumentError(to_string(task.mechanism) + " needs at least one destination");
  }
}

AccessPattern task_pattern(const TransferTask& task, const SimParams& params) {
  return task.pattern ? *task.pattern : AccessPattern::contiguous(0, task.bytes, params.link_bandwidth);
}

}  // namespace

LatencyReport run_chain(const std::vector<ChainNodeConfig>& chain, const MeshTopology& mesh,
                        const SimParams& params, const SimOptions& options) {
  params.validate();
  if (chain.empty()) throw ProtocolError("malformed chain: no nodes");
  if (chain.size() == 1) {
    const auto& only = chain.front();
    if (only.role != ChainRole::initiator || only.prev || only.next) {
      throw ProtocolError("malformed chain: a single node must be a standalone initiator");
    }
  } else {
    validate_chain(chain);
    if (chain.front().role != ChainRole::initiator) {
      throw ProtocolError("malformed chain: initiator must come first");
    }
  }
  if (chain.front().transfer_bytes == 0) throw InvalidArgumentError("transfer size must be positive");
  return ChainRun(chain, mesh, params, options).run();
}

LatencyReport run_chainwrite(const TransferTask& task, const MeshTopology& mesh,
                             const SimParams& params, const SimOptions& options) {
  params.validate();
  check_task(task, mesh, true);
  if (task.mechanism != TransferMechanism::chainwrite) {
    throw InvalidArgumentError("run_chainwrite needs a chainwrite task");
  }
  const AccessPattern pattern = task_pattern(task, params);

  if (task.destinations.empty()) {
    ChainNodeConfig solo{task.initiator, std::nullopt, std::nullopt, task.initiator,
                         ChainRole::initiator, task.task_id, task.bytes, pattern};
    return run_chain({solo}, mesh, params, options);
  }
  if (!task.order) throw InvalidArgumentError("chainwrite needs a chain order");
  const DestinationSet dests(task.initiator, task.destinations, mesh);
  return run_chain(build_chain_configs(dests, *task.order, task.bytes, pattern, task.task_id), mesh,
                   params, options);
}

LatencyReport run_unicast(const TransferTask& task, const MeshTopology& mesh,
                          const SimParams& params, const SimOptions& options) {
  params.validate();
  check_task(task, mesh, false);
  const DestinationSet dests(task.initiator, task.destinations, mesh);

  LatencyReport report;
  report.mechanism = TransferMechanism::unicast;
  Network net(mesh, params, options, report);

  const auto& targets = dests.destinations();
  std::vector<Cycle> done_at(targets.size(), 0);

  // Each copy starts when the previous one has landed: a single source read port.
  std::function<void(std::size_t, Cycle)> start = [&](std::size_t i, Cycle at) {
    if (i == targets.size()) return;
    const NodeId dst = targets[i];
    const Cycle stream_at = at + params.unicast_setup_cycles;
    auto remaining = std::make_shared<std::uint64_t>(frame_count(task.bytes, params.link_bandwidth));
    net.queue().schedule(at, [&net, dst] { net.log(dst, "unicast setup"); });
    for (std::uint64_t k = 1, n = *remaining; k <= n; ++k) {
      net.send(task.initiator, dst, stream_at + k, "data", true, [&, i, dst, remaining] {
        if (--*remaining == 0) {
          done_at[i] = net.now();
          net.log(dst, "unicast complete");
          start(i + 1, net.now());
        }
      });
    }
  };
  net.queue().schedule(0, [&] { start(0, 0); });

  const std::uint64_t messages = targets.size() * (frame_count(task.bytes, params.link_bandwidth) + 2) + 1;
  report.events_processed = net.queue().run(event_bound(messages, mesh));

  for (std::size_t i = 0; i < targets.size(); ++i) {
    report.per_dest_delivery.push_back(Delivery{targets[i], done_at[i], task.bytes, 0});
    report.total_cycles = std::max(report.total_cycles, done_at[i]);
  }
  const Cycle setup = static_cast<Cycle>(params.unicast_setup_cycles) * targets.size();
  report.phases = PhaseCycles{setup, 0, report.total_cycles - setup, 0};
  return report;
}

LatencyReport run_multicast(const TransferTask& task, const MeshTopology& mesh,
                            const SimParams& params, const SimOptions& options) {
  params.validate();
  check_task(task, mesh, false);
  const DestinationSet dests(task.initiator, task.destinations, mesh);
  const MulticastTree tree = multicast_tree(dests, mesh);

  std::map<NodeId, std::vector<DirectedLink>> children;
  for (const auto& link : tree.links) children[link.from].push_back(link);
  const std::set<NodeId> leaves(tree.leaves.begin(), tree.leaves.end());

  LatencyReport report;
  report.mechanism = TransferMechanism::multicast;
  Network net(mesh, params, options, report);

  std::map<NodeId, std::uint64_t> received;
  std::map<NodeId, Cycle> done_at;

  // Replicate a frame onto every outgoing tree link of `node`.
  std::function<void(NodeId, std::uint32_t)> fan_out = [&](NodeId node, std::uint32_t bytes) {
    if (leaves.contains(node)) {
      received[node] += bytes;
      if (received[node] == task.bytes) done_at[node] = net.now();
    }
    auto it = children.find(node);
    if (it == children.end()) return;
    for (const auto& link : it->second) {
      net.cross(link, net.now(), "data", true, [&fan_out, to = link.to, bytes] { fan_out(to, bytes); });
    }
  };

  const Cycle setup = params.multicast_setup_base +
                      static_cast<Cycle>(params.multicast_setup_per_dst) * dests.size();
  net.queue().schedule(0, [&] { net.log(task.initiator, "multicast setup"); });
  std::uint64_t left = task.bytes;
  for (Cycle k = 1; left > 0; ++k) {
    const auto chunk = static_cast<std::uint32_t>(std::min<std::uint64_t>(left, params.link_bandwidth));
    left -= chunk;
    net.queue().schedule(setup + k, [&fan_out, root = task.initiator, chunk] {
      // The root is never a leaf, so this only fans out.
      fan_out(root, chunk);
    });
  }

  const std::uint64_t messages =
      frame_count(task.bytes, params.link_bandwidth) * (tree.links.size() + 1) + 1;
  report.events_processed = net.queue().run(event_bound(messages, mesh));

  for (NodeId d : dests.destinations()) {
    report.per_dest_delivery.push_back(Delivery{d, done_at[d], received[d], 0});
    report.total_cycles = std::max(report.total_cycles, done_at[d]);
  }
  report.phases = PhaseCycles{setup, 0, report.total_cycles - setup, 0};
  return report;
}

LatencyReport simulate(const TransferTask& task, const MeshTopology& mesh, const SimParams& params,
                       const SimOptions& options) {
  switch (task.mechanism) {
    case TransferMechanism::unicast: return run_unicast(task, mesh, params, options);
    case TransferMechanism::multicast: return run_multicast(task, mesh, params, options);
    case TransferMechanism::chainwrite: return run_chainwrite(task, mesh, params, options);
  }
  throw InvalidArgumentError("unknown mechanism");
}

}  // namespace chainsim
