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

#include <algorithm>
#include <stdexcept>

#include "hilsim/controllers.hpp"

namespace hilsim {

PidController::PidController(const PidGains& gains, double period_s, bool anti_windup)
    : gains_(gains), period_s_(period_s), anti_windup_(anti_windup) {
  if (!(period_s_ > 0.0)) throw std::invalid_argument("PID period_s must be positive");
  if (!(gains_.out_min_V < gains_.out_max_V)) {
    throw std::invalid_argument("PID requires out_min_V < out_max_V");
  }
}

double PidController::step(double r_V, double y_V) {
  const double e = r_V - y_V;
  const double candidate = integral_ + e * period_s_;
  const double deriv = (e - prev_error_) / period_s_;
  prev_error_ = e;

  const double u = gains_.kp * e + gains_.ki * candidate + gains_.kd * deriv;
  const bool high = u > gains_.out_max_V;
  const bool low = u < gains_.out_min_V;
  saturated_ = high || low;

  const bool winding = (high && e > 0.0) || (low && e < 0.0);
  if (!(anti_windup_ && winding)) integral_ = candidate;
  return std::clamp(u, gains_.out_min_V, gains_.out_max_V);
}

void PidController::reset() {
  integral_ = 0.0;
  prev_error_ = 0.0;
  saturated_ = false;
}

}  // namespace hilsim
