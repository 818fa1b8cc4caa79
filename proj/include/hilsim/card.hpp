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

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>

namespace hilsim {

enum class DelayKind { kFixed, kUniformInt };

// Cycles between a DAC write and the value settling on the wire. kFixed
// requires min_cycles == max_cycles.
struct DelayModel {
  DelayKind kind = DelayKind::kUniformInt;
  int min_cycles = 3;
  int max_cycles = 7;

  double mean() const { return 0.5 * (min_cycles + max_cycles); }
  static DelayModel fixed(int cycles) { return {DelayKind::kFixed, cycles, cycles}; }
  bool operator==(const DelayModel&) const = default;
};

// Defect parameters of the two-in/two-out analog card. Defaults reproduce
// the measured behaviour of the low-cost card: 8 bits over a nominal 5 V
// span that only reaches 4.5 V, a slight bow in the DAC curve, a few cycles
// of write latency and a little ADC noise.
struct CardConfig {
  double nominal_fullscale_V = 5.0;
  double actual_max_V = 4.5;
  int bits = 8;
  DelayModel delay_model;
  double nonlin_alpha = 0.1;
  double noise_std_V = 0.01;
  std::uint64_t rng_seed = 0;

  int max_code() const { return (1 << bits) - 1; }
  // Nominal code step in volts.
  double lsb_V() const { return nominal_fullscale_V / max_code(); }

  // Throws std::invalid_argument on violated invariants.
  void validate() const;

  // Linear, full range, no delay, no noise.
  static CardConfig ideal(std::uint64_t seed = 0);

  bool operator==(const CardConfig&) const = default;
};

// Round-half-away-from-zero onto the nominal code grid, clamped.
int quantize(double v_V, const CardConfig& cfg);
double dequantize(int code, const CardConfig& cfg);

// Volts the DAC actually produces for a code:
//   actual_max_V * (x + alpha x (1 - x)),  x = code / max_code.
// Throws std::out_of_range for codes outside [0, max_code].
double dac_transfer(int code, const CardConfig& cfg);

class VirtualAddaCard {
 public:
  static constexpr int kChannels = 2;

  explicit VirtualAddaCard(const CardConfig& cfg);

  const CardConfig& config() const { return cfg_; }

  // Queues a code on a DAC channel with a freshly drawn delay. A zero delay
  // settles immediately.
  void dac_write(int channel, int code);

  // Samples the wire feeding an ADC channel, adds noise and quantizes.
  int adc_read(int channel);

  // One card cycle: counts down pending writes and settles those that are due.
  void advance_cycle();

  // ADC input wiring. Unbound inputs read the externally driven voltage.
  void bind_loopback(int dac_channel, int adc_channel);
  void unbind(int adc_channel);
  void drive_input(int adc_channel, double volts);

  double settled_V(int dac_channel) const;
  double wire_V(int adc_channel) const;
  std::size_t pending(int dac_channel) const;
  int last_drawn_delay() const { return last_delay_; }
  std::uint64_t cycles() const { return cycles_; }

 private:
  struct Pending {
    double volts;
    int cycles_remaining;
  };

  int draw_delay();
  static void check_channel(int channel);

  CardConfig cfg_;
  std::mt19937_64 rng_;
  std::array<std::deque<Pending>, kChannels> pipeline_;
  std::array<double, kChannels> settled_V_{};
  std::array<double, kChannels> external_V_{};
  std::array<std::optional<int>, kChannels> loopback_from_{};
  int last_delay_ = 0;
  std::uint64_t cycles_ = 0;
};

}  // namespace hilsim
