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

#include <cmath>

#include "hilsim/transport.hpp"

namespace hilsim {

HilPeer::HilPeer(const PeerOptions& opts, std::unique_ptr<ControlLaw> law,
                 ReferenceSignal reference, CardConfig scaling)
    : opts_(opts),
      socket_(opts.bind_address, opts.port),
      law_(std::move(law)),
      reference_(reference),
      scaling_(scaling),
      base_step_s_(opts.default_base_step_s) {}

std::optional<HilFrame> HilPeer::handle(const HilFrame& in) {
  switch (in.type) {
    case MsgType::kSync:
      base_step_s_ = in.seq / 1e6;
      last_seq_.reset();
      if (law_) law_->reset();
      return in;
    case MsgType::kSensor: {
      if (last_seq_ && in.seq <= *last_seq_) return std::nullopt;  // duplicate or reordered
      last_seq_ = in.seq;
      ++sensor_frames_;
      HilFrame out{MsgType::kActuator, in.seq, in.channel, in.code};
      if (law_) {
        const double y = dequantize(in.code, scaling_);
        const double r = reference_.at(static_cast<double>(in.seq) * base_step_s_);
        out.code = static_cast<std::uint8_t>(quantize(law_->step(r, y), scaling_));
      }
      return out;
    }
    case MsgType::kActuator:
    case MsgType::kBye:
      return std::nullopt;
  }
  return std::nullopt;
}

void HilPeer::serve(const std::atomic<bool>& stop) {
  while (!stop.load()) {
    auto dg = socket_.receive(std::chrono::milliseconds(50));
    if (!dg) continue;
    const DecodeResult res = decode_frame(dg->bytes);
    if (!res.frame) continue;
    if (res.frame->type == MsgType::kBye) {
      last_seq_.reset();
      if (law_) law_->reset();
      if (opts_.once) return;
      continue;
    }
    if (auto reply = handle(*res.frame)) socket_.send_to(encode_frame(*reply), dg->from);
  }
}

}  // namespace hilsim
