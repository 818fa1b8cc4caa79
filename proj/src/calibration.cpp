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

#include "hilsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hilsim {

CalibrationTable calibrate(const CardConfig& cfg) {
  cfg.validate();
  CalibrationTable table;
  table.max_code = cfg.max_code();
  table.achieved_max_V = cfg.actual_max_V;
  table.gain = cfg.nominal_fullscale_V / cfg.actual_max_V;

  std::vector<double> curve(static_cast<std::size_t>(table.max_code) + 1);
  for (int c = 0; c <= table.max_code; ++c) curve[c] = dac_transfer(c, cfg);

  table.inverse_lut.resize(curve.size());
  for (int t = 0; t <= table.max_code; ++t) {
    const double want = table.target_V(t);
    // Curve is monotone: the closest code is next to the first one >= want.
    const auto it = std::lower_bound(curve.begin(), curve.end(), want);
    int best = static_cast<int>(std::min<std::ptrdiff_t>(it - curve.begin(), table.max_code));
    if (best > 0 && std::abs(curve[best - 1] - want) <= std::abs(curve[best] - want)) --best;
    table.inverse_lut[t] = best;
    table.residual_max_V = std::max(table.residual_max_V, std::abs(curve[best] - want));
  }
  return table;
}

int target_code(double v_V, const CalibrationTable& table, const CardConfig& cfg) {
  const double v = std::clamp(v_V, 0.0, table.achieved_max_V);
  return quantize(v * table.gain, cfg);
}

CorrectedWrite corrected_write(VirtualAddaCard& card, int channel, double v_V,
                               const CalibrationTable& table) {
  const CardConfig& cfg = card.config();
  CorrectedWrite out;
  out.saturated = v_V < 0.0 || v_V > table.achieved_max_V;
  out.code_sent = table.inverse_lut.at(static_cast<std::size_t>(target_code(v_V, table, cfg)));
  out.expected_V = dac_transfer(out.code_sent, cfg);
  card.dac_write(channel, out.code_sent);
  return out;
}

void write_lut_csv(std::ostream& os, const CalibrationTable& table, const CardConfig& cfg) {
  os << "target_code,corrected_code,residual_V\n";
  for (int t = 0; t <= table.max_code; ++t) {
    const int c = table.inverse_lut[t];
    os << t << ',' << c << ',' << (dac_transfer(c, cfg) - table.target_V(t)) << '\n';
  }
}

}  // namespace hilsim
