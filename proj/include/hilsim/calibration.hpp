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

#include <iosfwd>
#include <vector>

#include "hilsim/card.hpp"

namespace hilsim {

// Gain plus inverse lookup table that linearizes the card's DAC over the
// range it can actually reach.
//
// A request v is first clamped to [0, achieved_max_V] and multiplied by
// `gain`, which stretches the achievable range onto the nominal code grid.
// The resulting target code t is then remapped through inverse_lut[t], the
// code whose real DAC output is closest to t's ideal voltage. The price is a
// coarser effective LSB (achieved_max_V / max_code instead of the nominal
// one).
struct CalibrationTable {
  double gain = 1.0;
  std::vector<int> inverse_lut;
  double achieved_max_V = 0.0;
  double residual_max_V = 0.0;
  int max_code = 0;

  double effective_lsb_V() const { return achieved_max_V / max_code; }
  // Ideal voltage for target code t.
  double target_V(int t) const { return t * effective_lsb_V(); }
};

// Sweeps the deterministic DAC curve (no noise, no delay) and builds the
// table. Ties between equally close codes resolve to the lower code.
CalibrationTable calibrate(const CardConfig& cfg);

struct CorrectedWrite {
  int code_sent = 0;
  double expected_V = 0.0;  // voltage the output settles to
  bool saturated = false;   // request was outside [0, achieved_max_V]
};

// Target code for a request, before the lookup.
int target_code(double v_V, const CalibrationTable& table, const CardConfig& cfg);

CorrectedWrite corrected_write(VirtualAddaCard& card, int channel, double v_V,
                               const CalibrationTable& table);

// CSV with columns target_code,corrected_code,residual_V.
void write_lut_csv(std::ostream& os, const CalibrationTable& table, const CardConfig& cfg);

}  // namespace hilsim
