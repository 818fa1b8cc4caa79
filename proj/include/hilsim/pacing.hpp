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

#include <chrono>

namespace hilsim {

using Clock = std::chrono::steady_clock;

struct PaceResult {
  bool met = true;
  double lateness_ms = 0.0;  // > 0 only when the deadline had already passed
};

// Blocks until `deadline`: sleeps to within `spin_margin` of it, then spins.
// Returns an overrun with the measured lateness if the deadline was already
// behind us on entry.
PaceResult pace(Clock::time_point deadline,
                std::chrono::microseconds spin_margin = std::chrono::milliseconds(1));

// Busy-waits for `seconds`; used to model per-cycle I/O cost.
void spin_for(double seconds);

}  // namespace hilsim
