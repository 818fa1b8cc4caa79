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

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hilsim/calibration.hpp"
#include "hilsim/card.hpp"
#include "hilsim/controllers.hpp"
#include "hilsim/plant.hpp"
#include "hilsim/reference.hpp"
#include "hilsim/trace.hpp"
#include "hilsim/transport.hpp"

namespace hilsim {

enum class RunMode { kSim, kRt, kHil };
enum class Pacing { kAsFastAsPossible, kWallClockPaced };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);
std::string to_string(Pacing p);
Pacing pacing_from_string(const std::string& s);

// Card channel roles.
inline constexpr int kActuatorChannel = 0;
inline constexpr int kSensorChannel = 1;

struct TimeBase {
  double base_step_s = 0.045;
  std::int64_t n_steps = 0;
  Pacing pacing = Pacing::kAsFastAsPossible;

  // Integer-indexed; never accumulated.
  double sim_time(std::int64_t k) const { return static_cast<double>(k) * base_step_s; }
};

// Fires a block at the first base step at or after each multiple of its
// period. Due times are n * period_s, so nothing drifts over long runs even
// when the period is not a whole number of base steps.
class RateSpec {
 public:
  RateSpec(std::string block_id, double period_s, double base_step_s);

  // True (and schedules the next due time) when the block runs at `step`.
  bool fire(std::int64_t step);

  const std::string& block_id() const { return block_id_; }
  double period_s() const { return period_s_; }
  std::int64_t next_due_step() const { return next_due_step_; }

 private:
  std::int64_t step_for(std::int64_t n) const;

  std::string block_id_;
  double period_s_;
  double base_step_s_;
  std::int64_t fired_ = 0;
  std::int64_t next_due_step_ = 0;
};

// Relative tolerance floor for expected values near zero.
inline constexpr double kToleranceFloorV = 0.05;

bool within_tolerance(double read_V, double expected_V, double tol_frac);

struct CompensatedRead {
  double value_V = 0.0;
  int code = 0;
  int retries = 0;
  bool tolerance_met = true;
};

// Re-reads an ADC channel, advancing the card one cycle between reads, until
// the reading is within tol_frac of expected_V or max_retries is used up.
// The last reading is returned either way. `on_cycle` runs after every
// advance (the executor uses it to charge wall time per card cycle).
CompensatedRead read_compensated(VirtualAddaCard& card, int channel, double expected_V,
                                 double tol_frac = 0.02, int max_retries = 20,
                                 const std::function<void()>& on_cycle = {});

struct LoopOptions {
  RunMode mode = RunMode::kSim;
  TimeBase timebase;
  double controller_period_s = 0.045;
  double tol_frac = 0.02;
  int max_retries = 20;
  double cycle_cost_s = 0.0;  // wall time charged per card cycle
};

using ControllerRef = std::variant<ControlLaw*, HilEndpoint*>;

struct RunResult {
  std::vector<TraceRecord> trace;
  RunReport report;
};

// Fixed-step loop. Per base step k:
//   1. r = reference(k * base_step)
//   2. sensor path: current plant output through the card (rt: compensated
//      re-read; hil: no re-read, the external side sees what it sees)
//   3. when the controller block is due: u from the local law or the HiL
//      round trip; otherwise u is held
//   4. actuator path: corrected write, one cycle, compensated read (rt) or
//      the external controller's output voltage (hil)
//   5. plant step with the actuated value
//   6. trace row; in paced mode wait for (k + 1) * base_step of wall time
//
// Row k describes the loop at t_k: y is the plant output at t_k and u the
// value applied over [t_k, t_k+1).
//
// sim mode needs no card. rt mode needs card and table. hil mode needs card,
// table and a HilEndpoint. Inconsistent configuration throws
// std::invalid_argument before the first step.
RunResult run_loop(const LoopOptions& opts, const ReferenceSignal& reference, PlantInstance& plant,
                   ControllerRef controller, VirtualAddaCard* card,
                   const CalibrationTable* table);

}  // namespace hilsim
