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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace chainsim {

/// Linear cluster index. Row-major over the mesh: id = y * x_dim + x.
struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, NodeId id) { return os << 'C' << id.value; }

struct Coord {
  int x = 0;
  int y = 0;

  constexpr auto operator<=>(const Coord&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, Coord c) {
  return os << '(' << c.x << ',' << c.y << ')';
}

/// One unidirectional channel between neighbouring routers.
struct DirectedLink {
  NodeId from;
  NodeId to;

  constexpr auto operator<=>(const DirectedLink&) const = default;
};

/// Ordered, contiguous sequence of directed links.
struct RoutePath {
  std::vector<DirectedLink> links;

  [[nodiscard]] std::size_t hops() const noexcept { return links.size(); }
  [[nodiscard]] bool empty() const noexcept { return links.empty(); }
};

class MeshTopology {
 public:
  static constexpr std::uint32_t kDefaultLinkBandwidth = 64;  // bytes per cycle
  static constexpr std::uint32_t kDefaultHopLatency = 1;      // cycles per hop

  /// Throws InvalidArgumentError on zero dimensions, zero bandwidth or zero hop latency.
  MeshTopology(int x_dim, int y_dim, std::uint32_t link_bandwidth = kDefaultLinkBandwidth,
               std::uint32_t hop_latency = kDefaultHopLatency);

  /// Parses "XxY", e.g. "8x8" or "4x5".
  static MeshTopology parse(const std::string& text);

  [[nodiscard]] int x_dim() const noexcept { return x_dim_; }
  [[nodiscard]] int y_dim() const noexcept { return y_dim_; }
  [[nodiscard]] std::uint32_t link_bandwidth() const noexcept { return link_bandwidth_; }
  [[nodiscard]] std::uint32_t hop_latency() const noexcept { return hop_latency_; }
  [[nodiscard]] std::uint32_t node_count() const noexcept {
    return static_cast<std::uint32_t>(x_dim_) * static_cast<std::uint32_t>(y_dim_);
  }

  [[nodiscard]] bool contains(NodeId id) const noexcept { return id.value < node_count(); }
  [[nodiscard]] bool contains(Coord c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < x_dim_ && c.y < y_dim_;
  }

  [[nodiscard]] std::string to_string() const;

 private:
  int x_dim_;
  int y_dim_;
  std::uint32_t link_bandwidth_;
  std::uint32_t hop_latency_;
};

/// Throws InvalidNodeError when id is outside the mesh.
Coord node_to_coord(NodeId id, const MeshTopology& mesh);
NodeId coord_to_node(Coord c, const MeshTopology& mesh);

constexpr int manhattan_distance(Coord a, Coord b) noexcept {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx + dy;
}

/// Manhattan distance between two node ids.
int hop_distance(NodeId a, NodeId b, const MeshTopology& mesh);

/// Dimension-ordered route: every X link first, then every Y link.
RoutePath xy_route(NodeId src, NodeId dst, const MeshTopology& mesh);

/// The node sequence visited by a path, starting at its source. Empty path yields {src}.
std::vector<NodeId> path_nodes(NodeId src, const RoutePath& path);

}  // namespace chainsim

template <>
struct std::hash<chainsim::NodeId> {
  std::size_t operator()(chainsim::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

template <>
struct std::hash<chainsim::DirectedLink> {
  std::size_t operator()(const chainsim::DirectedLink& l) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{l.from.value} << 32) | l.to.value);
  }
};
