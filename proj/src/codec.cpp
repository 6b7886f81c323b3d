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

#include "chainsim/codec.hpp"

#include <iomanip>
#include <set>
#include <sstream>

#include "chainsim/error.hpp"

namespace chainsim {

namespace {

class BitWriter {
 public:
  void put(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) {
      const std::size_t bit = size_++;
      if (bit / 8 >= bytes_.size()) bytes_.push_back(0);
      if ((value >> i) & 1U) bytes_[bit / 8] |= static_cast<std::uint8_t>(1U << (bit % 8));
    }
  }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t get(unsigned width) {
    if (pos_ + width > bytes_.size() * 8) {
      throw FramingError("cfg payload is truncated");
    }
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i, ++pos_) {
      if ((bytes_[pos_ / 8] >> (pos_ % 8)) & 1U) v |= std::uint64_t{1} << i;
    }
    return v;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void check_width(unsigned link_width_bits) {
  if (link_width_bits % 8 != 0 || link_width_bits <= kFrameHeaderBits) {
    std::ostringstream os;
    os << "link width " << link_width_bits << " bits cannot carry a " << kFrameHeaderBits
       << "-bit frame header plus body (need a byte multiple above " << kFrameHeaderBits << ")";
    throw InvalidArgumentError(os.str());
  }
}

std::uint16_t node_field(const std::optional<NodeId>& n) {
  return n ? static_cast<std::uint16_t>(n->value) : kNoNode;
}

std::optional<NodeId> field_node(std::uint64_t v) {
  if (v == kNoNode) return std::nullopt;
  return NodeId{static_cast<std::uint32_t>(v)};
}

}  // namespace

std::size_t cfg_payload_bits(std::size_t dims) { return 3 * 16 + 32 + 32 + 8 + 64 * dims + 32; }

std::size_t cfg_frame_count(std::size_t dims, unsigned link_width_bits) {
  check_width(link_width_bits);
  const std::size_t usable = link_width_bits - kFrameHeaderBits;
  return (cfg_payload_bits(dims) + usable - 1) / usable;
}

CfgPacket encode_cfg(const ChainNodeConfig& cfg, unsigned link_width_bits, CfgType type) {
  check_width(link_width_bits);
  cfg.pattern.validate();
  for (NodeId n : {cfg.node, cfg.initiator}) {
    if (n.value >= kNoNode) throw InvalidArgumentError("node id does not fit in 16 bits");
  }
  if ((cfg.prev && cfg.prev->value >= kNoNode) || (cfg.next && cfg.next->value >= kNoNode)) {
    throw InvalidArgumentError("node id does not fit in 16 bits");
  }
  if (cfg.task_id >= (1U << 24)) throw InvalidArgumentError("task id does not fit in 24 bits");
  if (cfg.transfer_bytes == 0) throw InvalidArgumentError("transfer size must be positive");

  BitWriter payload;
  payload.put(node_field(cfg.prev), 16);
  payload.put(node_field(cfg.next), 16);
  payload.put(cfg.initiator.value, 16);
  payload.put(static_cast<std::uint8_t>(cfg.role), 8);
  payload.put(cfg.task_id, 24);
  payload.put(cfg.transfer_bytes, 32);
  payload.put(cfg.pattern.strides.size(), 8);
  for (std::size_t i = 0; i < cfg.pattern.strides.size(); ++i) {
    payload.put(static_cast<std::uint32_t>(cfg.pattern.strides[i]), 32);
    payload.put(cfg.pattern.bounds[i], 32);
  }
  payload.put(cfg.pattern.base, 32);

  const std::size_t body_bytes = (link_width_bits - kFrameHeaderBits) / 8;
  const std::size_t count = cfg_frame_count(cfg.pattern.strides.size(), link_width_bits);
  if (count > kMaxFrames) throw InvalidArgumentError("cfg needs more frames than the header can count");

  CfgPacket packet{type, cfg.node, {}};
  packet.frames.reserve(count);
  const auto& bytes = payload.bytes();
  for (std::size_t f = 0; f < count; ++f) {
    Frame frame{type, static_cast<std::uint16_t>(f == 0 ? count : f + 1),
                std::vector<std::uint8_t>(body_bytes, 0)};
    for (std::size_t b = 0; b < body_bytes; ++b) {
      const std::size_t src = f * body_bytes + b;
      if (src < bytes.size()) frame.body[b] = bytes[src];
    }
    packet.frames.push_back(std::move(frame));
  }
  return packet;
}

ChainNodeConfig decode_cfg(const CfgPacket& packet) {
  const auto& frames = packet.frames;
  if (frames.empty()) throw FramingError("cfg packet has no frames");

  const std::size_t expected = frames.front().identifier;
  if (expected == 0) throw FramingError("first frame announces zero frames");

  std::set<std::uint16_t> seen;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!seen.insert(frames[i].identifier).second) {
      std::ostringstream os;
      os << "frame " << frames[i].identifier << " is duplicated";
      throw FramingError(os.str());
    }
  }
  if (frames.size() != expected) {
    std::ostringstream os;
    os << "first frame announces " << expected << " frames but " << frames.size() << " arrived";
    throw FramingError(os.str());
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].identifier != i + 1) {
      std::ostringstream os;
      os << "expected frame " << i + 1 << " at position " << i + 1 << ", got frame "
         << frames[i].identifier;
      throw FramingError(os.str());
    }
  }
  for (const auto& f : frames) {
    if (f.type != frames.front().type) throw FramingError("frames disagree on the type identifier");
    if (f.body.size() != frames.front().body.size()) throw FramingError("frames differ in width");
  }

  std::vector<std::uint8_t> bytes;
  bytes.reserve(frames.size() * frames.front().body.size());
  for (const auto& f : frames) bytes.insert(bytes.end(), f.body.begin(), f.body.end());

  BitReader in(bytes);
  ChainNodeConfig cfg;
  cfg.node = packet.target;
  cfg.prev = field_node(in.get(16));
  cfg.next = field_node(in.get(16));
  cfg.initiator = NodeId{static_cast<std::uint32_t>(in.get(16))};
  const auto role = in.get(8);
  if (role < 1 || role > 3) throw FramingError("unknown role code in field D");
  cfg.role = static_cast<ChainRole>(role);
  cfg.task_id = static_cast<std::uint32_t>(in.get(24));
  cfg.transfer_bytes = static_cast<std::uint32_t>(in.get(32));
  if (cfg.transfer_bytes == 0) throw FramingError("field E carries a zero transfer size");
  const auto dims = static_cast<std::size_t>(in.get(8));
  if (cfg_frame_count(dims, static_cast<unsigned>(frames.front().body.size() * 8 + kFrameHeaderBits)) !=
      frames.size()) {
    throw FramingError("frame count does not match the encoded pattern size");
  }
  for (std::size_t i = 0; i < dims; ++i) {
    cfg.pattern.strides.push_back(static_cast<std::int32_t>(static_cast<std::uint32_t>(in.get(32))));
    cfg.pattern.bounds.push_back(static_cast<std::uint32_t>(in.get(32)));
  }
  cfg.pattern.base = static_cast<std::uint32_t>(in.get(32));
  for (auto b : cfg.pattern.bounds) {
    if (b == 0) throw FramingError("field F carries a zero bound");
  }
  return cfg;
}

std::vector<std::uint8_t> to_bytes(const CfgPacket& packet) {
  std::vector<std::uint8_t> out;
  for (const auto& f : packet.frames) {
    const std::uint16_t header = static_cast<std::uint16_t>(
        static_cast<unsigned>(f.type) | (static_cast<unsigned>(f.identifier) << 2));
    out.push_back(static_cast<std::uint8_t>(header & 0xFF));
    out.push_back(static_cast<std::uint8_t>(header >> 8));
    out.insert(out.end(), f.body.begin(), f.body.end());
  }
  return out;
}

CfgPacket packet_from_bytes(std::span<const std::uint8_t> bytes, NodeId target) {
  if (bytes.size() < 2) throw FramingError("byte image shorter than a frame header");
  const unsigned first = bytes[0] | (static_cast<unsigned>(bytes[1]) << 8);
  const std::size_t count = first >> 2;
  if (count == 0 || bytes.size() % count != 0) {
    throw FramingError("byte image length is not a whole number of frames");
  }
  const std::size_t frame_bytes = bytes.size() / count;
  if (frame_bytes <= 2) throw FramingError("frame too narrow to carry a body");

  CfgPacket packet;
  packet.target = target;
  packet.type = static_cast<CfgType>(first & 0x3);
  for (std::size_t f = 0; f < count; ++f) {
    const auto frame = bytes.subspan(f * frame_bytes, frame_bytes);
    const unsigned header = frame[0] | (static_cast<unsigned>(frame[1]) << 8);
    const unsigned type = header & 0x3;
    if (type > 1) throw FramingError("unknown type identifier");
    packet.frames.push_back(Frame{static_cast<CfgType>(type), static_cast<std::uint16_t>(header >> 2),
                                  std::vector<std::uint8_t>(frame.begin() + 2, frame.end())});
  }
  return packet;
}

std::string dump_packet(const CfgPacket& packet) {
  std::ostringstream os;
  const auto bytes = to_bytes(packet);
  const std::size_t frame_bytes = packet.frames.empty() ? 0 : bytes.size() / packet.frames.size();
  os << "type: " << (packet.type == CfgType::write_request ? "write_request" : "read_request")
     << "\nframes: " << packet.frames.size() << " x " << frame_bytes * 8 << " bits\n";
  for (std::size_t f = 0; f < packet.frames.size(); ++f) {
    os << "frame " << f + 1 << " [id=" << packet.frames[f].identifier << "]:";
    for (std::size_t b = 0; b < frame_bytes; ++b) {
      os << ' ' << std::hex << std::setw(2) << std::setfill('0')
         << static_cast<unsigned>(bytes[f * frame_bytes + b]) << std::dec;
    }
    os << '\n';
  }

  const ChainNodeConfig cfg = decode_cfg(packet);
  auto node_str = [](const std::optional<NodeId>& n) {
    std::ostringstream s;
    if (n) s << *n; else s << "none";
    return s.str();
  };
  os << "A prev:      " << node_str(cfg.prev) << '\n'
     << "B next:      " << node_str(cfg.next) << '\n'
     << "C initiator: " << cfg.initiator << '\n'
     << "D role/task: " << to_string(cfg.role) << " / " << cfg.task_id << '\n'
     << "E bytes:     " << cfg.transfer_bytes << '\n'
     << "F pattern:   base=" << cfg.pattern.base << " strides=[";
  for (std::size_t i = 0; i < cfg.pattern.strides.size(); ++i) {
    os << (i ? "," : "") << cfg.pattern.strides[i];
  }
  os << "] bounds=[";
  for (std::size_t i = 0; i < cfg.pattern.bounds.size(); ++i) {
    os << (i ? "," : "") << cfg.pattern.bounds[i];
  }
  os << "]\n";
  return os.str();
}

}  // namespace chainsim
