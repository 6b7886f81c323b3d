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

#include "chainsim/scheduling.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "chainsim/error.hpp"

namespace chainsim {

DestinationSet::DestinationSet(NodeId initiator, std::vector<NodeId> destinations,
                               const MeshTopology& mesh)
    : initiator_(initiator), destinations_(std::move(destinations)) {
  if (!mesh.contains(initiator_)) {
    std::ostringstream os;
    os << "initiator " << initiator_ << " is outside the " << mesh.to_string() << " mesh";
    throw InvalidNodeError(os.str());
  }
  if (destinations_.empty()) {
    throw InvalidArgumentError("destination set is empty");
  }
  std::sort(destinations_.begin(), destinations_.end());
  for (std::size_t i = 0; i < destinations_.size(); ++i) {
    const NodeId d = destinations_[i];
    if (!mesh.contains(d)) {
      std::ostringstream os;
      os << "destination " << d << " is outside the " << mesh.to_string() << " mesh";
      throw InvalidNodeError(os.str());
    }
    if (d == initiator_) {
      throw InvalidArgumentError("initiator cannot also be a destination");
    }
    if (i > 0 && destinations_[i - 1] == d) {
      std::ostringstream os;
      os << "duplicate destination " << d;
      throw InvalidArgumentError(os.str());
    }
  }
}

Strategy parse_strategy(const std::string& name) {
  if (name == "naive") return Strategy::naive;
  if (name == "greedy") return Strategy::greedy;
  if (name == "tsp-exact") return Strategy::tsp_exact;
  if (name == "tsp-heuristic") return Strategy::tsp_heuristic;
  throw InvalidArgumentError("unknown strategy '" + name +
                             "' (expected naive, greedy, tsp-exact or tsp-heuristic)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::naive: return "naive";
    case Strategy::greedy: return "greedy";
    case Strategy::tsp_exact: return "tsp-exact";
    case Strategy::tsp_heuristic: return "tsp-heuristic";
  }
  return "unknown";
}

DistanceMatrix::DistanceMatrix(const std::vector<NodeId>& nodes, const MeshTopology& mesh)
    : n_(nodes.size()), d_(n_ * n_, 0) {
  std::vector<Coord> coords;
  coords.reserve(n_);
  for (NodeId id : nodes) {
    coords.push_back(node_to_coord(id, mesh));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      d_[i * n_ + j] = manhattan_distance(coords[i], coords[j]);
    }
  }
}

ChainOrder naive_order(const DestinationSet& task) { return ChainOrder{task.destinations()}; }

GreedyTrace greedy_trace(const DestinationSet& task, const MeshTopology& mesh, GreedyStart start) {
  std::vector<NodeId> remaining = task.destinations();  // ascending id

  auto first = remaining.begin();
  if (start == GreedyStart::closest) {
    first = std::min_element(remaining.begin(), remaining.end(), [&](NodeId a, NodeId b) {
      return hop_distance(task.initiator(), a, mesh) < hop_distance(task.initiator(), b, mesh);
    });
  }

  GreedyTrace trace;
  std::unordered_set<DirectedLink> used;
  auto take = [&](std::vector<NodeId>::iterator it, const RoutePath& path, bool fallback) {
    trace.order.visit.push_back(*it);
    trace.steps.push_back({*it, static_cast<int>(path.hops()), fallback});
    used.insert(path.links.begin(), path.links.end());
    remaining.erase(it);
  };

  take(first, xy_route(task.initiator(), *first, mesh), false);

  const int hop_bound = mesh.x_dim() + mesh.y_dim();
  while (!remaining.empty()) {
    const NodeId tail = trace.order.visit.back();
    auto best = remaining.end();
    auto shortest = remaining.end();
    int best_hops = hop_bound;
    int shortest_hops = std::numeric_limits<int>::max();
    RoutePath best_path;
    RoutePath shortest_path;

    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      RoutePath path = xy_route(tail, *it, mesh);
      const int hops = static_cast<int>(path.hops());
      const bool overlaps = std::any_of(path.links.begin(), path.links.end(),
                                        [&](const DirectedLink& l) { return used.contains(l); });
      if (!overlaps && hops < best_hops) {
        best = it;
        best_hops = hops;
        best_path = path;
      }
      if (hops < shortest_hops) {
        shortest = it;
        shortest_hops = hops;
        shortest_path = std::move(path);
      }
    }

    if (best == remaining.end()) {
      take(shortest, shortest_path, true);
    } else {
      take(best, best_path, false);
    }
  }
  return trace;
}

ChainOrder greedy_order(const DestinationSet& task, const MeshTopology& mesh, GreedyStart start) {
  return greedy_trace(task, mesh, start).order;
}

namespace {

// Index 0 of the matrix is the initiator; destinations occupy 1..n.
DistanceMatrix task_matrix(const DestinationSet& task, const MeshTopology& mesh) {
  std::vector<NodeId> nodes{task.initiator()};
  nodes.insert(nodes.end(), task.destinations().begin(), task.destinations().end());
  return DistanceMatrix(nodes, mesh);
}

ChainOrder order_from_indices(const DestinationSet& task, const std::vector<std::size_t>& idx) {
  ChainOrder order;
  order.visit.reserve(idx.size());
  for (std::size_t i : idx) {
    order.visit.push_back(task.destinations()[i - 1]);
  }
  return order;
}

std::vector<std::size_t> held_karp(const DistanceMatrix& d) {
  const std::size_t n = d.size() - 1;
  const std::size_t full = (std::size_t{1} << n) - 1;
  constexpr int kInf = std::numeric_limits<int>::max();

  std::vector<int> cost((full + 1) * n, kInf);
  std::vector<std::uint8_t> parent((full + 1) * n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    cost[(std::size_t{1} << j) * n + j] = d(0, j + 1);
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      const int here = cost[mask * n + j];
      if (here == kInf) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const int c = here + d(j + 1, k + 1);
        if (c < cost[next * n + k]) {
          cost[next * n + k] = c;
          parent[next * n + k] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }

  std::size_t last = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (cost[full * n + j] < cost[full * n + last]) last = j;
  }
  std::vector<std::size_t> idx(n);
  std::size_t mask = full;
  for (std::size_t pos = n; pos-- > 0;) {
    idx[pos] = last + 1;
    const std::size_t prev = parent[mask * n + last];
    mask &= ~(std::size_t{1} << last);
    last = prev;
  }
  return idx;
}

std::vector<std::size_t> nearest_neighbor(const DistanceMatrix& d) {
  const std::size_t n = d.size() - 1;
  std::vector<bool> visited(n + 1, false);
  std::vector<std::size_t> idx;
  idx.reserve(n);
  std::size_t cur = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (!visited[k] && (best == 0 || d(cur, k) < d(cur, best))) best = k;
    }
    visited[best] = true;
    idx.push_back(best);
    cur = best;
  }
  return idx;
}

// First-improvement 2-opt on the open path 0 -> idx[0] -> ... -> idx[n-1].
void two_opt(const DistanceMatrix& d, std::vector<std::size_t>& idx) {
  std::vector<std::size_t> p{0};
  p.insert(p.end(), idx.begin(), idx.end());
  const std::size_t n = idx.size();

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i < n && !improved; ++i) {
      for (std::size_t j = i + 1; j <= n && !improved; ++j) {
        int delta = d(p[i - 1], p[j]) - d(p[i - 1], p[i]);
        if (j < n) delta += d(p[i], p[j + 1]) - d(p[j], p[j + 1]);
        if (delta < 0) {
          std::reverse(p.begin() + static_cast<std::ptrdiff_t>(i),
                       p.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  idx.assign(p.begin() + 1, p.end());
}

}  // namespace

ChainOrder nearest_neighbor_order(const DestinationSet& task, const MeshTopology& mesh) {
  return order_from_indices(task, nearest_neighbor(task_matrix(task, mesh)));
}

ChainOrder tsp_order(const DestinationSet& task, const MeshTopology& mesh, TspMode mode) {
  const DistanceMatrix d = task_matrix(task, mesh);
  if (mode == TspMode::exact) {
    if (task.size() > kExactTspThreshold) {
      std::ostringstream os;
      os << "exact TSP supports at most " << kExactTspThreshold << " destinations (got "
         << task.size() << "); use tsp-heuristic";
      throw CapacityError(os.str());
    }
    return order_from_indices(task, held_karp(d));
  }
  auto idx = nearest_neighbor(d);
  two_opt(d, idx);
  return order_from_indices(task, idx);
}

ChainOrder schedule(const DestinationSet& task, const MeshTopology& mesh, Strategy strategy) {
  switch (strategy) {
    case Strategy::naive: return naive_order(task);
    case Strategy::greedy: return greedy_order(task, mesh);
    case Strategy::tsp_exact: return tsp_order(task, mesh, TspMode::exact);
    case Strategy::tsp_heuristic: return tsp_order(task, mesh, TspMode::heuristic);
  }
  throw InvalidArgumentError("unknown strategy");
}

long chain_hops(const ChainOrder& order, NodeId initiator, const MeshTopology& mesh) {
  long total = 0;
  NodeId prev = initiator;
  for (NodeId n : order.visit) {
    total += hop_distance(prev, n, mesh);
    prev = n;
  }
  return total;
}

bool is_permutation_of(const ChainOrder& order, const DestinationSet& task) {
  auto sorted = order.visit;
  std::sort(sorted.begin(), sorted.end());
  return sorted == task.destinations();
}

}  // namespace chainsim
