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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chainsim/topology.hpp"

namespace chainsim {

/// Initiator plus the unordered set of nodes that must receive a copy.
class DestinationSet {
 public:
  /// Throws InvalidArgumentError if empty, duplicated, or containing the initiator,
  /// and InvalidNodeError if a node lies outside the mesh.
  DestinationSet(NodeId initiator, std::vector<NodeId> destinations, const MeshTopology& mesh);

  [[nodiscard]] NodeId initiator() const noexcept { return initiator_; }
  /// Sorted ascending by id.
  [[nodiscard]] const std::vector<NodeId>& destinations() const noexcept { return destinations_; }
  [[nodiscard]] std::size_t size() const noexcept { return destinations_.size(); }

 private:
  NodeId initiator_;
  std::vector<NodeId> destinations_;
};

/// Visit order of a chain, excluding the initiator.
struct ChainOrder {
  std::vector<NodeId> visit;

  bool operator==(const ChainOrder&) const = default;
};

enum class Strategy { naive, greedy, tsp_exact, tsp_heuristic };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

/// Pairwise hop counts over a node list; index 0 is conventionally the initiator.
class DistanceMatrix {
 public:
  DistanceMatrix(const std::vector<NodeId>& nodes, const MeshTopology& mesh);

  [[nodiscard]] int operator()(std::size_t i, std::size_t j) const noexcept {
    return d_[i * n_ + j];
  }
  [[nodiscard]] std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<int> d_;
};

/// Held-Karp is used up to this many destinations.
inline constexpr std::size_t kExactTspThreshold = 16;

ChainOrder naive_order(const DestinationSet& task);

enum class GreedyStart {
  min_id,   // first destination is the lowest id
  closest,  // first destination is the one nearest to the initiator
};

struct GreedyStep {
  NodeId node;
  int hops = 0;
  bool fallback = false;  // no overlap-free candidate existed
};

struct GreedyTrace {
  ChainOrder order;
  std::vector<GreedyStep> steps;  // steps[0] is the initial segment from the initiator
};

GreedyTrace greedy_trace(const DestinationSet& task, const MeshTopology& mesh,
                         GreedyStart start = GreedyStart::min_id);
ChainOrder greedy_order(const DestinationSet& task, const MeshTopology& mesh,
                        GreedyStart start = GreedyStart::min_id);

enum class TspMode { exact, heuristic };

/// Open-path TSP anchored at the initiator. Exact mode throws CapacityError above
/// kExactTspThreshold destinations.
ChainOrder tsp_order(const DestinationSet& task, const MeshTopology& mesh, TspMode mode);

/// Nearest-neighbour construction alone, before 2-opt.
ChainOrder nearest_neighbor_order(const DestinationSet& task, const MeshTopology& mesh);

ChainOrder schedule(const DestinationSet& task, const MeshTopology& mesh, Strategy strategy);

/// Sum of hop distances initiator -> v1 -> ... -> vN.
long chain_hops(const ChainOrder& order, NodeId initiator, const MeshTopology& mesh);

/// True when order is a permutation of the task's destinations.
bool is_permutation_of(const ChainOrder& order, const DestinationSet& task);

}  // namespace chainsim
