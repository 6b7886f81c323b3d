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

#include "chainsim/multicast.hpp"

#include "chainsim/error.hpp"

namespace chainsim {

MulticastTree multicast_tree(const DestinationSet& task, const MeshTopology& mesh) {
  MulticastTree tree{task.initiator(), task.destinations(), {}};
  for (NodeId d : task.destinations()) {
    const RoutePath path = xy_route(task.initiator(), d, mesh);
    tree.links.insert(path.links.begin(), path.links.end());
  }
  return tree;
}

long unicast_hops(const DestinationSet& task, const MeshTopology& mesh) {
  long total = 0;
  for (NodeId d : task.destinations()) {
    total += hop_distance(task.initiator(), d, mesh);
  }
  return total;
}

Mechanism parse_mechanism(const std::string& name) {
  if (name == "unicast") return Mechanism::unicast;
  if (name == "multicast") return Mechanism::multicast;
  if (name == "chain_naive") return Mechanism::chain_naive;
  if (name == "chain_greedy") return Mechanism::chain_greedy;
  if (name == "chain_tsp") return Mechanism::chain_tsp;
  throw InvalidArgumentError("unknown mechanism '" + name + "'");
}

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::unicast: return "unicast";
    case Mechanism::multicast: return "multicast";
    case Mechanism::chain_naive: return "chain_naive";
    case Mechanism::chain_greedy: return "chain_greedy";
    case Mechanism::chain_tsp: return "chain_tsp";
  }
  return "unknown";
}

HopReport hop_report(const DestinationSet& task, const MeshTopology& mesh, Mechanism mechanism,
                     TspMode tsp_mode) {
  HopReport report{mechanism, 0, static_cast<long>(task.size())};
  switch (mechanism) {
    case Mechanism::unicast:
      report.total_hops = unicast_hops(task, mesh);
      break;
    case Mechanism::multicast:
      report.total_hops = multicast_tree(task, mesh).total_hops();
      break;
    case Mechanism::chain_naive:
      report.total_hops = chain_hops(naive_order(task), task.initiator(), mesh);
      break;
    case Mechanism::chain_greedy:
      report.total_hops = chain_hops(greedy_order(task, mesh), task.initiator(), mesh);
      break;
    case Mechanism::chain_tsp:
      report.total_hops = chain_hops(tsp_order(task, mesh, tsp_mode), task.initiator(), mesh);
      break;
    default:
      throw InvalidArgumentError("unknown mechanism");
  }
  return report;
}

}  // namespace chainsim
