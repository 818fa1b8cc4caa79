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

#pragma once

#include <netinet/in.h>

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hilsim/card.hpp"
#include "hilsim/controllers.hpp"
#include "hilsim/reference.hpp"

namespace hilsim {

// ---------------------------------------------------------------------------
// In-process wiring: DAC output pins hardwired to ADC input pins.

struct Wire {
  int dac_channel;
  int adc_channel;
};

inline constexpr std::array<Wire, 2> kLoopbackWires{{{0, 0}, {1, 1}}};

void hardwire(VirtualAddaCard& card, std::span<const Wire> wires);

// ---------------------------------------------------------------------------
// HiL datagram
//
//   offset  size  field
//   0       2     magic 0x48 0x4C ("HL")
//   2       1     version (1)
//   3       1     msg_type
//   4       4     seq, big-endian
//   8       1     channel
//   9       1     code (raw 8-bit sample)

inline constexpr std::size_t kFrameSize = 10;
inline constexpr std::uint8_t kFrameVersion = 0x01;
inline constexpr std::uint16_t kDefaultHilPort = 47055;

enum class MsgType : std::uint8_t {
  kSensor = 0x01,    // card -> controller
  kActuator = 0x02,  // controller -> card
  kSync = 0x03,      // session start; seq carries the base step in microseconds
  kBye = 0x04,
};

struct HilFrame {
  MsgType type = MsgType::kSensor;
  std::uint32_t seq = 0;
  std::uint8_t channel = 0;
  std::uint8_t code = 0;

  bool operator==(const HilFrame&) const = default;
};

using FrameBytes = std::array<std::uint8_t, kFrameSize>;

FrameBytes encode_frame(const HilFrame& f);

enum class FrameError { kNone, kBadMagic, kBadVersion, kBadLength, kBadType };

std::string to_string(FrameError e);

struct DecodeResult {
  std::optional<HilFrame> frame;
  FrameError error = FrameError::kNone;
};

DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// UDP

// HILSIM_PORT if set and valid, else kDefaultHilPort.
std::uint16_t default_hil_port();

class UdpSocket {
 public:
  // Binds to address:port (port 0 picks an ephemeral port). Throws
  // std::system_error on failure.
  UdpSocket(const std::string& bind_address, std::uint16_t port);
  ~UdpSocket();
  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  std::uint16_t local_port() const;
  void send_to(std::span<const std::uint8_t> bytes, const sockaddr_in& to);

  struct Datagram {
    std::vector<std::uint8_t> bytes;
    sockaddr_in from{};
  };
  // Waits at most `timeout` for one datagram.
  std::optional<Datagram> receive(std::chrono::microseconds timeout);

 private:
  int fd_ = -1;
};

sockaddr_in make_address(const std::string& address, std::uint16_t port);

struct HilEndpointConfig {
  std::string bind_address = "127.0.0.1";
  std::uint16_t bind_port = 0;
  std::string peer_address = "127.0.0.1";
  std::uint16_t peer_port = kDefaultHilPort;
  int step_timeout_ms = 45;

  void validate() const;
  bool operator==(const HilEndpointConfig&) const = default;
};

// Card side of the HiL link.
class HilEndpoint {
 public:
  explicit HilEndpoint(const HilEndpointConfig& cfg);

  // Announces the base step and waits for the peer's SYNC echo. Returns
  // false if no acknowledgement arrives within `attempts` x `wait`.
  bool sync(double base_step_s, std::chrono::milliseconds wait = std::chrono::milliseconds(500),
            int attempts = 3);

  struct RoundTrip {
    int u_code = 0;
    bool timed_out = false;
  };

  // Sends SENSOR(y_code) and waits for the ACTUATOR reply carrying the same
  // seq. Stale or foreign datagrams are dropped. On timeout the previous
  // u_code is held. seq must increase across calls.
  RoundTrip round_trip(int y_code, std::uint32_t seq, int channel = 0);

  void bye();

  int last_u_code() const { return last_u_code_; }
  std::uint16_t local_port() const { return socket_.local_port(); }
  std::uint64_t discarded_frames() const { return discarded_; }

 private:
  HilEndpointConfig cfg_;
  UdpSocket socket_;
  sockaddr_in peer_{};
  int last_u_code_ = 0;
  std::optional<std::uint32_t> last_seq_;
  std::uint64_t discarded_ = 0;
};

// ---------------------------------------------------------------------------
// Reference external controller

struct PeerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = kDefaultHilPort;
  bool once = false;              // return after the first BYE
  double default_base_step_s = 0.045;  // used until a SYNC arrives
};

// Controller process for the far end of the link. Without a law it echoes
// the sensor code back. With a law it converts the code with the card's
// nominal scaling, evaluates the reference at seq * base_step, runs the law
// and quantizes the result.
class HilPeer {
 public:
  HilPeer(const PeerOptions& opts, std::unique_ptr<ControlLaw> law, ReferenceSignal reference,
          CardConfig scaling);

  std::uint16_t port() const { return socket_.local_port(); }

  // Serves until `stop` is set or, with opts.once, until a BYE arrives.
  void serve(const std::atomic<bool>& stop);

  std::uint64_t sensor_frames() const { return sensor_frames_; }

 private:
  std::optional<HilFrame> handle(const HilFrame& in);

  PeerOptions opts_;
  UdpSocket socket_;
  std::unique_ptr<ControlLaw> law_;
  ReferenceSignal reference_;
  CardConfig scaling_;
  double base_step_s_;
  std::optional<std::uint32_t> last_seq_;
  std::uint64_t sensor_frames_ = 0;
};

}  // namespace hilsim
