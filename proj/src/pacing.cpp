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

#include "hilsim/pacing.hpp"

#include <thread>

namespace hilsim {

PaceResult pace(Clock::time_point deadline, std::chrono::microseconds spin_margin) {
  const auto now = Clock::now();
  if (now > deadline) {
    return {false, std::chrono::duration<double, std::milli>(now - deadline).count()};
  }
  if (deadline - now > spin_margin) std::this_thread::sleep_until(deadline - spin_margin);
  while (Clock::now() < deadline) {
  }
  return {};
}

void spin_for(double seconds) {
  if (seconds <= 0.0) return;
  const auto until = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(seconds));
  while (Clock::now() < until) {
  }
}

}  // namespace hilsim
