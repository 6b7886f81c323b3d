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

#include <doctest.h>

#include <random>

#include "chainsim/error.hpp"
#include "chainsim/protocol.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace chainsim;
using testutil::ids;

TEST_CASE("affine address examples") {
  CHECK(gen_affine_addresses(AccessPattern{0, {8}, {4}}) == std::vector<std::int64_t>{0, 8, 16, 24});
  CHECK(gen_affine_addresses(AccessPattern{100, {64, 8}, {2, 3}}) ==
        std::vector<std::int64_t>{100, 108, 116, 164, 172, 180});
  CHECK(gen_affine_addresses(AccessPattern{0, {}, {}}) == std::vector<std::int64_t>{0});
  CHECK(gen_affine_addresses(AccessPattern{100, {64, 8}, {2, 3}}) ==
        oracle::nested_affine(100, {64, 8}, {2, 3}));
}

TEST_CASE("affine addresses against nested loops") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dims = rng() % 4;
    AccessPattern p{static_cast<std::uint32_t>(rng() % 100000), {}, {}};
    for (std::size_t d = 0; d < dims; ++d) {
      p.strides.push_back(static_cast<std::int32_t>(rng() % 2001) - 1000);
      p.bounds.push_back(1 + static_cast<std::uint32_t>(rng() % 6));
    }
    const auto got = gen_affine_addresses(p);
    CHECK(got.size() == p.element_count());
    CHECK(got == oracle::nested_affine(p.base, p.strides, p.bounds));
  }
}

TEST_CASE("contiguous pattern") {
  const AccessPattern p = AccessPattern::contiguous(256, 1000, 64);
  CHECK(p.element_count() == 16);
  const auto a = gen_affine_addresses(p);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == 256 + 64 * static_cast<std::int64_t>(i));
}

TEST_CASE("pattern validation") {
  CHECK_THROWS_AS(AccessPattern({0, {8, 8}, {2}}).validate(), InvalidArgumentError);
  CHECK_THROWS_AS(AccessPattern({0, {8}, {0}}).validate(), InvalidArgumentError);
  CHECK_THROWS_AS(gen_affine_addresses(AccessPattern{0, {8}, {0}}), InvalidArgumentError);
}

TEST_CASE("chain construction") {
  const MeshTopology mesh(4, 4);
  const DestinationSet task(NodeId{0}, ids({3, 12, 15}), mesh);
  const ChainOrder order{ids({3, 15, 12})};
  const auto chain = build_chain_configs(task, order, 4096, AccessPattern::contiguous(0, 4096, 64), 42);
  REQUIRE(chain.size() == 4);
  CHECK(chain[0].node == NodeId{0});
  CHECK_FALSE(chain[0].prev.has_value());
  CHECK(chain[0].next == NodeId{3});
  CHECK(chain[0].role == ChainRole::initiator);
  CHECK(chain[1].node == NodeId{3});
  CHECK(chain[1].prev == NodeId{0});
  CHECK(chain[1].next == NodeId{15});
  CHECK(chain[1].role == ChainRole::middle);
  CHECK(chain[2].node == NodeId{15});
  CHECK(chain[2].next == NodeId{12});
  CHECK(chain[3].node == NodeId{12});
  CHECK(chain[3].prev == NodeId{15});
  CHECK_FALSE(chain[3].next.has_value());
  CHECK(chain[3].role == ChainRole::tail);
  for (const auto& c : chain) {
    CHECK(c.initiator == NodeId{0});
    CHECK(c.task_id == 42);
    CHECK(c.transfer_bytes == 4096);
  }
  CHECK_NOTHROW(validate_chain(chain));
}

TEST_CASE("single destination chain") {
  const MeshTopology mesh(4, 4);
  const DestinationSet task(NodeId{5}, ids({6}), mesh);
  const auto chain = build_chain_configs(task, ChainOrder{ids({6})}, 64, AccessPattern::contiguous(0, 64, 64));
  REQUIRE(chain.size() == 2);
  CHECK(chain[1].role == ChainRole::tail);
  CHECK(chain[1].prev == NodeId{5});
}

TEST_CASE("chain construction errors") {
  const MeshTopology mesh(4, 4);
  const DestinationSet task(NodeId{0}, ids({3, 12, 15}), mesh);
  const AccessPattern p = AccessPattern::contiguous(0, 64, 64);
  CHECK_THROWS_AS(build_chain_configs(task, ChainOrder{ids({3, 15})}, 64, p), InvalidArgumentError);
  CHECK_THROWS_AS(build_chain_configs(task, ChainOrder{ids({3, 15, 15})}, 64, p), InvalidArgumentError);
  CHECK_THROWS_AS(build_chain_configs(task, ChainOrder{ids({3, 15, 4})}, 64, p), InvalidArgumentError);
  CHECK_THROWS_AS(build_chain_configs(task, ChainOrder{ids({3, 15, 12})}, 64, p, 1U << 24), InvalidArgumentError);
  CHECK_THROWS_AS(build_chain_configs(task, ChainOrder{ids({3, 15, 12})}, 64, std::vector<AccessPattern>{p, p}),
                  InvalidArgumentError);
}

TEST_CASE("per-node patterns") {
  const MeshTopology mesh(4, 4);
  const DestinationSet task(NodeId{0}, ids({1, 2}), mesh);
  const std::vector<AccessPattern> pats = {AccessPattern{0, {64}, {2}}, AccessPattern{128, {64}, {2}},
                                           AccessPattern{512, {-64}, {2}}};
  const auto chain = build_chain_configs(task, ChainOrder{ids({2, 1})}, 128, pats);
  CHECK(chain[0].pattern == pats[0]);
  CHECK(chain[1].node == NodeId{2});
  CHECK(chain[1].pattern == pats[1]);
  CHECK(chain[2].pattern == pats[2]);
}

TEST_CASE("linked-list integrity on random chains") {
  std::mt19937_64 rng(3);
  const MeshTopology mesh(8, 8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t i = 1; i < 64; ++i) pool.push_back(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % 30);
    const DestinationSet task(NodeId{0}, ids(pool), mesh);
    const auto chain = build_chain_configs(task, ChainOrder{ids(pool)}, 64, AccessPattern::contiguous(0, 64, 64));

    std::map<NodeId, const ChainNodeConfig*> by_node;
    for (const auto& c : chain) by_node[c.node] = &c;
    std::vector<NodeId> forward;
    for (const ChainNodeConfig* c = by_node[NodeId{0}]; c; c = c->next ? by_node[*c->next] : nullptr) {
      forward.push_back(c->node);
    }
    std::vector<NodeId> backward;
    for (const ChainNodeConfig* c = by_node[chain.back().node]; c; c = c->prev ? by_node[*c->prev] : nullptr) {
      backward.push_back(c->node);
    }
    std::reverse(backward.begin(), backward.end());
    CHECK(forward.size() == chain.size());
    CHECK(forward == backward);
  }
}

TEST_CASE("validate_chain rejects broken lists") {
  const MeshTopology mesh(4, 4);
  const DestinationSet task(NodeId{0}, ids({1, 2, 3}), mesh);
  const auto good = build_chain_configs(task, ChainOrder{ids({1, 2, 3})}, 64, AccessPattern::contiguous(0, 64, 64));

  auto bad = good;
  bad[2].prev = NodeId{3};
  CHECK_THROWS_AS(validate_chain(bad), ProtocolError);
  bad = good;
  bad[1].next = NodeId{3};
  CHECK_THROWS_AS(validate_chain(bad), ProtocolError);
  bad = good;
  bad[3].next = NodeId{1};
  CHECK_THROWS_AS(validate_chain(bad), ProtocolError);
  bad = good;
  bad[0].prev = NodeId{3};
  CHECK_THROWS_AS(validate_chain(bad), ProtocolError);
  bad = good;
  bad[2].role = ChainRole::tail;
  CHECK_THROWS_AS(validate_chain(bad), ProtocolError);
  bad = good;
  bad[3].transfer_bytes = 128;
  CHECK_THROWS_AS(validate_chain(bad), ProtocolError);
  CHECK_THROWS_AS(validate_chain({}), ProtocolError);
}
