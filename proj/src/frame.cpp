// Copyright 2026 The hilsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hilsim/transport.hpp"

namespace hilsim {

void hardwire(VirtualAddaCard& card, std::span<const Wire> wires) {
  for (const Wire& w : wires) card.bind_loopback(w.dac_channel, w.adc_channel);
}

FrameBytes encode_frame(const HilFrame& f) {
  return {0x48,
          0x4C,
          kFrameVersion,
          static_cast<std::uint8_t>(f.type),
          static_cast<std::uint8_t>(f.seq >> 24),
          static_cast<std::uint8_t>(f.seq >> 16),
          static_cast<std::uint8_t>(f.seq >> 8),
          static_cast<std::uint8_t>(f.seq),
          f.channel,
          f.code};
}

std::string to_string(FrameError e) {
  switch (e) {
    case FrameError::kNone: return "none";
    case FrameError::kBadMagic: return "BadMagic";
    case FrameError::kBadVersion: return "BadVersion";
    case FrameError::kBadLength: return "BadLength";
    case FrameError::kBadType: return "BadType";
  }
  return "unknown";
}

DecodeResult decode_frame(std::span<const std::uint8_t> b) {
  if (b.size() != kFrameSize) return {std::nullopt, FrameError::kBadLength};
  if (b[0] != 0x48 || b[1] != 0x4C) return {std::nullopt, FrameError::kBadMagic};
  if (b[2] != kFrameVersion) return {std::nullopt, FrameError::kBadVersion};
  if (b[3] < 0x01 || b[3] > 0x04) return {std::nullopt, FrameError::kBadType};
  HilFrame f;
  f.type = static_cast<MsgType>(b[3]);
  f.seq = (std::uint32_t{b[4]} << 24) | (std::uint32_t{b[5]} << 16) | (std::uint32_t{b[6]} << 8) |
          std::uint32_t{b[7]};
  f.channel = b[8];
  f.code = b[9];
  return {f, FrameError::kNone};
}

}  // namespace hilsim
