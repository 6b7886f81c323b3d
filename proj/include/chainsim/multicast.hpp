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

#include <set>
#include <string>
#include <vector>

#include "chainsim/scheduling.hpp"
#include "chainsim/topology.hpp"

namespace chainsim {

/// Union of the XY routes from the root to every leaf. A packet replicates at
/// branch points, so each link carries the data exactly once.
struct MulticastTree {
  NodeId root;
  std::vector<NodeId> leaves;
  std::set<DirectedLink> links;

  [[nodiscard]] long total_hops() const noexcept { return static_cast<long>(links.size()); }
};

MulticastTree multicast_tree(const DestinationSet& task, const MeshTopology& mesh);

/// Sum of the initiator-to-destination Manhattan distances.
long unicast_hops(const DestinationSet& task, const MeshTopology& mesh);

enum class Mechanism { unicast, multicast, chain_naive, chain_greedy, chain_tsp };

Mechanism parse_mechanism(const std::string& name);
std::string to_string(Mechanism m);

struct HopReport {
  Mechanism mechanism = Mechanism::unicast;
  long total_hops = 0;
  long n_dst = 0;

  [[nodiscard]] double avg_hops_per_dest() const noexcept {
    return static_cast<double>(total_hops) / static_cast<double>(n_dst);
  }
};

/// tsp_mode selects the solver used for chain_tsp.
HopReport hop_report(const DestinationSet& task, const MeshTopology& mesh, Mechanism mechanism,
                     TspMode tsp_mode = TspMode::heuristic);

}  // namespace chainsim
