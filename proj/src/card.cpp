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

#include "hilsim/card.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hilsim {

void CardConfig::validate() const {
  if (!(nominal_fullscale_V > 0.0)) throw std::invalid_argument("nominal_fullscale_V must be > 0");
  if (!(actual_max_V > 0.0 && actual_max_V <= nominal_fullscale_V)) {
    throw std::invalid_argument("actual_max_V must lie in (0, nominal_fullscale_V]");
  }
  if (bits < 1 || bits > 16) throw std::invalid_argument("bits must lie in [1, 16]");
  if (delay_model.min_cycles < 0 || delay_model.min_cycles > delay_model.max_cycles) {
    throw std::invalid_argument("delay_model requires 0 <= min_cycles <= max_cycles");
  }
  if (delay_model.kind == DelayKind::kFixed && delay_model.min_cycles != delay_model.max_cycles) {
    throw std::invalid_argument("fixed delay_model requires min_cycles == max_cycles");
  }
  if (!(std::abs(nonlin_alpha) < 1.0)) throw std::invalid_argument("|nonlin_alpha| must be < 1");
  if (!(noise_std_V >= 0.0)) throw std::invalid_argument("noise_std_V must be >= 0");
}

CardConfig CardConfig::ideal(std::uint64_t seed) {
  CardConfig c;
  c.actual_max_V = c.nominal_fullscale_V;
  c.delay_model = DelayModel::fixed(0);
  c.nonlin_alpha = 0.0;
  c.noise_std_V = 0.0;
  c.rng_seed = seed;
  return c;
}

int quantize(double v_V, const CardConfig& cfg) {
  const double v = std::clamp(v_V, 0.0, cfg.nominal_fullscale_V);
  return static_cast<int>(std::round(v / cfg.nominal_fullscale_V * cfg.max_code()));
}

double dequantize(int code, const CardConfig& cfg) {
  return static_cast<double>(code) / cfg.max_code() * cfg.nominal_fullscale_V;
}

double dac_transfer(int code, const CardConfig& cfg) {
  if (code < 0 || code > cfg.max_code()) {
    throw std::out_of_range("DAC code " + std::to_string(code) + " outside [0, " +
                            std::to_string(cfg.max_code()) + "]");
  }
  const double x = static_cast<double>(code) / cfg.max_code();
  return cfg.actual_max_V * (x + cfg.nonlin_alpha * x * (1.0 - x));
}

VirtualAddaCard::VirtualAddaCard(const CardConfig& cfg) : cfg_(cfg), rng_(cfg.rng_seed) {
  cfg_.validate();
}

void VirtualAddaCard::check_channel(int channel) {
  if (channel < 0 || channel >= kChannels) {
    throw std::out_of_range("invalid card channel " + std::to_string(channel));
  }
}

int VirtualAddaCard::draw_delay() {
  const DelayModel& m = cfg_.delay_model;
  if (m.kind == DelayKind::kFixed || m.min_cycles == m.max_cycles) return m.min_cycles;
  std::uniform_int_distribution<int> dist(m.min_cycles, m.max_cycles);
  return dist(rng_);
}

void VirtualAddaCard::dac_write(int channel, int code) {
  check_channel(channel);
  const double volts = dac_transfer(code, cfg_);
  last_delay_ = draw_delay();
  if (last_delay_ == 0) {
    // Anything still in flight is older than this value.
    pipeline_[channel].clear();
    settled_V_[channel] = volts;
    return;
  }
  pipeline_[channel].push_back({volts, last_delay_});
}

void VirtualAddaCard::advance_cycle() {
  ++cycles_;
  for (int ch = 0; ch < kChannels; ++ch) {
    auto& q = pipeline_[ch];
    for (auto& p : q) --p.cycles_remaining;
    // The newest due entry wins; older entries (due or not) are superseded.
    auto newest_due = std::find_if(q.rbegin(), q.rend(),
                                   [](const Pending& p) { return p.cycles_remaining <= 0; });
    if (newest_due != q.rend()) {
      settled_V_[ch] = newest_due->volts;
      q.erase(q.begin(), newest_due.base());
    }
  }
}

int VirtualAddaCard::adc_read(int channel) {
  check_channel(channel);
  double v = wire_V(channel);
  if (cfg_.noise_std_V > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg_.noise_std_V);
    v += noise(rng_);
  }
  return quantize(v, cfg_);
}

void VirtualAddaCard::bind_loopback(int dac_channel, int adc_channel) {
  check_channel(dac_channel);
  check_channel(adc_channel);
  loopback_from_[adc_channel] = dac_channel;
}

void VirtualAddaCard::unbind(int adc_channel) {
  check_channel(adc_channel);
  loopback_from_[adc_channel].reset();
}

void VirtualAddaCard::drive_input(int adc_channel, double volts) {
  check_channel(adc_channel);
  external_V_[adc_channel] = volts;
}

double VirtualAddaCard::settled_V(int dac_channel) const {
  check_channel(dac_channel);
  return settled_V_[dac_channel];
}

double VirtualAddaCard::wire_V(int adc_channel) const {
  check_channel(adc_channel);
  const auto& src = loopback_from_[adc_channel];
  return src ? settled_V_[*src] : external_V_[adc_channel];
}

std::size_t VirtualAddaCard::pending(int dac_channel) const {
  check_channel(dac_channel);
  return pipeline_[dac_channel].size();
}

}  // namespace hilsim
