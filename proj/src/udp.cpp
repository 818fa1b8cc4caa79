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

#include <arpa/inet.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <system_error>

#include "hilsim/transport.hpp"

namespace hilsim {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

std::uint16_t default_hil_port() {
  if (const char* env = std::getenv("HILSIM_PORT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<std::uint16_t>(v);
  }
  return kDefaultHilPort;
}

sockaddr_in make_address(const std::string& address, std::uint16_t port) {
  sockaddr_in a{};
  a.sin_family = AF_INET;
  a.sin_port = htons(port);
  if (inet_pton(AF_INET, address.c_str(), &a.sin_addr) != 1) {
    throw std::invalid_argument("not an IPv4 address: '" + address + "'");
  }
  return a;
}

UdpSocket::UdpSocket(const std::string& bind_address, std::uint16_t port) {
  const sockaddr_in addr = make_address(bind_address, port);
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) throw_errno("socket");
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const int err = errno;
    ::close(fd_);
    fd_ = -1;
    throw std::system_error(err, std::generic_category(),
                            "bind " + bind_address + ":" + std::to_string(port));
  }
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

std::uint16_t UdpSocket::local_port() const {
  sockaddr_in a{};
  socklen_t len = sizeof a;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&a), &len) != 0) throw_errno("getsockname");
  return ntohs(a.sin_port);
}

void UdpSocket::send_to(std::span<const std::uint8_t> bytes, const sockaddr_in& to) {
  const ssize_t n = ::sendto(fd_, bytes.data(), bytes.size(), 0,
                             reinterpret_cast<const sockaddr*>(&to), sizeof to);
  if (n < 0) throw_errno("sendto");
}

std::optional<UdpSocket::Datagram> UdpSocket::receive(std::chrono::microseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  const int ms = static_cast<int>(std::ceil(timeout.count() / 1000.0));
  const int ready = ::poll(&pfd, 1, ms < 0 ? 0 : ms);
  if (ready < 0) {
    if (errno == EINTR) return std::nullopt;
    throw_errno("poll");
  }
  if (ready == 0) return std::nullopt;
  Datagram d;
  d.bytes.resize(64);
  socklen_t len = sizeof d.from;
  const ssize_t n = ::recvfrom(fd_, d.bytes.data(), d.bytes.size(), 0,
                               reinterpret_cast<sockaddr*>(&d.from), &len);
  if (n < 0) {
    if (errno == EINTR || errno == EAGAIN || errno == ECONNREFUSED) return std::nullopt;
    throw_errno("recvfrom");
  }
  d.bytes.resize(static_cast<std::size_t>(n));
  return d;
}

void HilEndpointConfig::validate() const {
  if (step_timeout_ms <= 0) throw std::invalid_argument("step_timeout_ms must be > 0");
  make_address(bind_address, bind_port);
  make_address(peer_address, peer_port);
}

HilEndpoint::HilEndpoint(const HilEndpointConfig& cfg)
    : cfg_(cfg), socket_(cfg.bind_address, cfg.bind_port) {
  cfg_.validate();
  peer_ = make_address(cfg_.peer_address, cfg_.peer_port);
}

bool HilEndpoint::sync(double base_step_s, std::chrono::milliseconds wait, int attempts) {
  const auto us = static_cast<std::uint32_t>(std::llround(base_step_s * 1e6));
  const FrameBytes out = encode_frame({MsgType::kSync, us, 0, 0});
  for (int i = 0; i < attempts; ++i) {
    socket_.send_to(out, peer_);
    const auto deadline = std::chrono::steady_clock::now() + wait;
    while (true) {
      const auto left = std::chrono::duration_cast<std::chrono::microseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) break;
      auto dg = socket_.receive(left);
      if (!dg) break;
      const DecodeResult res = decode_frame(dg->bytes);
      if (res.frame && res.frame->type == MsgType::kSync && res.frame->seq == us) return true;
      ++discarded_;
    }
  }
  return false;
}

HilEndpoint::RoundTrip HilEndpoint::round_trip(int y_code, std::uint32_t seq, int channel) {
  if (last_seq_ && seq <= *last_seq_) {
    throw std::invalid_argument("HiL seq must increase: " + std::to_string(seq) +
                                " after " + std::to_string(*last_seq_));
  }
  if (y_code < 0 || y_code > 255) throw std::out_of_range("sensor code outside 8-bit range");
  last_seq_ = seq;
  socket_.send_to(encode_frame({MsgType::kSensor, seq, static_cast<std::uint8_t>(channel),
                                static_cast<std::uint8_t>(y_code)}),
                  peer_);

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(cfg_.step_timeout_ms);
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::microseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) break;
    auto dg = socket_.receive(left);
    if (!dg) break;
    const DecodeResult res = decode_frame(dg->bytes);
    if (!res.frame || res.frame->type != MsgType::kActuator || res.frame->seq != seq) {
      ++discarded_;
      continue;
    }
    last_u_code_ = res.frame->code;
    return {last_u_code_, false};
  }
  return {last_u_code_, true};
}

void HilEndpoint::bye() {
  const std::uint32_t seq = last_seq_ ? *last_seq_ + 1 : 0;
  socket_.send_to(encode_frame({MsgType::kBye, seq, 0, 0}), peer_);
}

}  // namespace hilsim
