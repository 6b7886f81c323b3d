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
#include <span>
#include <string>
#include <vector>

#include "chainsim/protocol.hpp"

namespace chainsim {

// Canonical cfg layout. Each frame is one link-width beat:
//
//   bits [0,2)    type identifier (0 = read request, 1 = write request)
//   bits [2,16)   frame identifier (first frame: total count; others: 1-based index)
//   bits [16,W)   next chunk of the payload
//
// Payload, packed LSB-first across frame bodies:
//   A  16  previous node (0xFFFF = none)
//   B  16  next node (0xFFFF = none)
//   C  16  initiator node
//   D   8  role code, then 24-bit task id
//   E  32  transfer size in bytes
//   F   8  dimension count n, then n x (32-bit stride, 32-bit bound), then 32-bit base
//
// Byte images are little-endian, one frame after another, W/8 bytes per frame.

enum class CfgType : std::uint8_t { read_request = 0, write_request = 1 };

inline constexpr unsigned kFrameHeaderBits = 16;
inline constexpr std::uint16_t kNoNode = 0xFFFF;
inline constexpr std::uint32_t kMaxFrames = (1U << 14) - 1;

struct Frame {
  CfgType type = CfgType::write_request;
  std::uint16_t identifier = 0;      // 14 bits
  std::vector<std::uint8_t> body;    // (link_width_bits - 16) / 8 bytes

  bool operator==(const Frame&) const = default;
};

struct CfgPacket {
  CfgType type = CfgType::write_request;
  NodeId target;  // transport-level address of the receiving endpoint, not carried in frames
  std::vector<Frame> frames;

  bool operator==(const CfgPacket&) const = default;
};

/// Payload size in bits for a cfg with the given number of pattern dimensions.
std::size_t cfg_payload_bits(std::size_t dims);

/// Frames needed to carry a cfg with `dims` pattern dimensions on a `link_width_bits` link.
std::size_t cfg_frame_count(std::size_t dims, unsigned link_width_bits);

/// Throws InvalidArgumentError for widths that are not a byte multiple or leave no
/// room after the header, or for field values that do not fit the layout.
CfgPacket encode_cfg(const ChainNodeConfig& cfg, unsigned link_width_bits,
                     CfgType type = CfgType::write_request);

/// Throws FramingError on missing, duplicated, or inconsistently counted frames.
ChainNodeConfig decode_cfg(const CfgPacket& packet);

std::vector<std::uint8_t> to_bytes(const CfgPacket& packet);

/// Frame width is recovered from the first header's total count.
CfgPacket packet_from_bytes(std::span<const std::uint8_t> bytes, NodeId target);

/// Human-readable hex and field breakdown.
std::string dump_packet(const CfgPacket& packet);

}  // namespace chainsim
