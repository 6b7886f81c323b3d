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

#include "chainsim/topology.hpp"

#include <charconv>
#include <sstream>

#include "chainsim/error.hpp"

namespace chainsim {

MeshTopology::MeshTopology(int x_dim, int y_dim, std::uint32_t link_bandwidth,
                           std::uint32_t hop_latency)
    : x_dim_(x_dim), y_dim_(y_dim), link_bandwidth_(link_bandwidth), hop_latency_(hop_latency) {
  if (x_dim < 1 || y_dim < 1) {
    throw InvalidArgumentError("mesh dimensions must be at least 1x1");
  }
  // NodeId values must fit the 16-bit cfg fields with 0xFFFF reserved.
  if (static_cast<std::uint64_t>(x_dim) * static_cast<std::uint64_t>(y_dim) >= 0xFFFF) {
    throw InvalidArgumentError("mesh has too many nodes");
  }
  if (link_bandwidth == 0) {
    throw InvalidArgumentError("link bandwidth must be positive");
  }
  if (hop_latency == 0) {
    throw InvalidArgumentError("hop latency must be at least 1 cycle");
  }
}

MeshTopology MeshTopology::parse(const std::string& text) {
  const auto sep = text.find_first_of("xX");
  if (sep == std::string::npos || sep == 0 || sep + 1 == text.size()) {
    throw InvalidArgumentError("mesh must be given as XxY, got '" + text + "'");
  }
  auto parse_int = [&](std::string_view part) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw InvalidArgumentError("mesh must be given as XxY, got '" + text + "'");
    }
    return v;
  };
  const std::string_view view{text};
  return MeshTopology(parse_int(view.substr(0, sep)), parse_int(view.substr(sep + 1)));
}

std::string MeshTopology::to_string() const {
  std::ostringstream os;
  os << x_dim_ << 'x' << y_dim_;
  return os.str();
}

Coord node_to_coord(NodeId id, const MeshTopology& mesh) {
  if (!mesh.contains(id)) {
    std::ostringstream os;
    os << "node " << id.value << " is outside the " << mesh.to_string() << " mesh";
    throw InvalidNodeError(os.str());
  }
  const auto x_dim = static_cast<std::uint32_t>(mesh.x_dim());
  return Coord{static_cast<int>(id.value % x_dim), static_cast<int>(id.value / x_dim)};
}

NodeId coord_to_node(Coord c, const MeshTopology& mesh) {
  if (!mesh.contains(c)) {
    std::ostringstream os;
    os << "coordinate " << c << " is outside the " << mesh.to_string() << " mesh";
    throw InvalidNodeError(os.str());
  }
  return NodeId{static_cast<std::uint32_t>(c.y * mesh.x_dim() + c.x)};
}

int hop_distance(NodeId a, NodeId b, const MeshTopology& mesh) {
  return manhattan_distance(node_to_coord(a, mesh), node_to_coord(b, mesh));
}

RoutePath xy_route(NodeId src, NodeId dst, const MeshTopology& mesh) {
  Coord cur = node_to_coord(src, mesh);
  const Coord target = node_to_coord(dst, mesh);

  RoutePath path;
  path.links.reserve(static_cast<std::size_t>(manhattan_distance(cur, target)));
  auto step = [&](Coord next) {
    path.links.push_back({coord_to_node(cur, mesh), coord_to_node(next, mesh)});
    cur = next;
  };
  while (cur.x != target.x) {
    step({cur.x + (target.x > cur.x ? 1 : -1), cur.y});
  }
  while (cur.y != target.y) {
    step({cur.x, cur.y + (target.y > cur.y ? 1 : -1)});
  }
  return path;
}

std::vector<NodeId> path_nodes(NodeId src, const RoutePath& path) {
  std::vector<NodeId> nodes{src};
  nodes.reserve(path.hops() + 1);
  for (const auto& link : path.links) {
    nodes.push_back(link.to);
  }
  return nodes;
}

}  // namespace chainsim
