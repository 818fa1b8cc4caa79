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

#include "hilsim/executor.hpp"

#include <cmath>
#include <stdexcept>

#include "hilsim/pacing.hpp"

namespace hilsim {

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::kSim: return "sim";
    case RunMode::kRt: return "rt";
    case RunMode::kHil: return "hil";
  }
  return "sim";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "sim") return RunMode::kSim;
  if (s == "rt") return RunMode::kRt;
  if (s == "hil") return RunMode::kHil;
  throw std::invalid_argument("unknown mode '" + s + "' (expected sim, rt or hil)");
}

std::string to_string(Pacing p) {
  return p == Pacing::kWallClockPaced ? "wall_clock_paced" : "as_fast_as_possible";
}

Pacing pacing_from_string(const std::string& s) {
  if (s == "wall_clock_paced") return Pacing::kWallClockPaced;
  if (s == "as_fast_as_possible") return Pacing::kAsFastAsPossible;
  throw std::invalid_argument("unknown pacing '" + s +
                              "' (expected as_fast_as_possible or wall_clock_paced)");
}

// ---------------------------------------------------------------------------

namespace {
constexpr double kStepEps = 1e-9;
}  // namespace

RateSpec::RateSpec(std::string block_id, double period_s, double base_step_s)
    : block_id_(std::move(block_id)), period_s_(period_s), base_step_s_(base_step_s) {
  if (!(base_step_s_ > 0.0)) throw std::invalid_argument("base_step_s must be positive");
  if (!(period_s_ >= base_step_s_ * (1.0 - kStepEps))) {
    throw std::invalid_argument("block '" + block_id_ + "' period is shorter than the base step");
  }
  next_due_step_ = step_for(0);
}

std::int64_t RateSpec::step_for(std::int64_t n) const {
  const double due_in_steps = static_cast<double>(n) * period_s_ / base_step_s_;
  return static_cast<std::int64_t>(std::ceil(due_in_steps - kStepEps));
}

bool RateSpec::fire(std::int64_t step) {
  if (step < next_due_step_) return false;
  // Skip any due times already behind us so a late caller fires once.
  while (step_for(fired_) <= step) ++fired_;
  next_due_step_ = step_for(fired_);
  return true;
}

// ---------------------------------------------------------------------------

bool within_tolerance(double read_V, double expected_V, double tol_frac) {
  return std::abs(read_V - expected_V) <= tol_frac * std::max(std::abs(expected_V), kToleranceFloorV);
}

CompensatedRead read_compensated(VirtualAddaCard& card, int channel, double expected_V,
                                 double tol_frac, int max_retries,
                                 const std::function<void()>& on_cycle) {
  if (!(tol_frac > 0.0)) throw std::invalid_argument("tol_frac must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  CompensatedRead out;
  while (true) {
    out.code = card.adc_read(channel);
    out.value_V = dequantize(out.code, card.config());
    if (within_tolerance(out.value_V, expected_V, tol_frac)) return out;
    if (out.retries == max_retries) {
      out.tolerance_met = false;
      return out;
    }
    card.advance_cycle();
    if (on_cycle) on_cycle();
    ++out.retries;
  }
}

// ---------------------------------------------------------------------------

namespace {

void validate(const LoopOptions& opts, const PlantInstance& plant, const ControllerRef& controller,
              const VirtualAddaCard* card, const CalibrationTable* table) {
  const double base = opts.timebase.base_step_s;
  if (!(base > 0.0)) throw std::invalid_argument("base_step_s must be positive");
  if (opts.timebase.n_steps < 0) throw std::invalid_argument("n_steps must be >= 0");
  if (std::abs(plant.sys.period_s() - base) > kStepEps * base) {
    throw std::invalid_argument("plant was discretized at " + std::to_string(plant.sys.period_s()) +
                                " s, loop base step is " + std::to_string(base) + " s");
  }
  if (!(opts.controller_period_s >= base * (1.0 - kStepEps))) {
    throw std::invalid_argument("controller_period_s must be >= base_step_s");
  }
  if (!(opts.tol_frac > 0.0)) throw std::invalid_argument("tol_frac must be positive");
  if (opts.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (opts.cycle_cost_s < 0.0) throw std::invalid_argument("cycle_cost_s must be >= 0");

  const bool remote = std::holds_alternative<HilEndpoint*>(controller);
  const bool has_controller =
      remote ? std::get<HilEndpoint*>(controller) != nullptr : std::get<ControlLaw*>(controller) != nullptr;
  if (!has_controller) throw std::invalid_argument("no controller supplied");
  if (opts.mode == RunMode::kHil && !remote) {
    throw std::invalid_argument("hil mode needs a HiL endpoint as controller");
  }
  if (opts.mode != RunMode::kHil && remote) {
    throw std::invalid_argument("a HiL endpoint can only drive hil mode");
  }
  if (opts.mode != RunMode::kSim) {
    if (card == nullptr || table == nullptr) {
      throw std::invalid_argument(to_string(opts.mode) + " mode needs a card and a calibration table");
    }
    const CardConfig& cfg = card->config();
    if (table->max_code != cfg.max_code() ||
        static_cast<int>(table->inverse_lut.size()) != cfg.max_code() + 1 ||
        table->achieved_max_V != cfg.actual_max_V) {
      throw std::invalid_argument("calibration table was not built for this card configuration");
    }
  }
}

}  // namespace

RunResult run_loop(const LoopOptions& opts, const ReferenceSignal& reference, PlantInstance& plant,
                   ControllerRef controller, VirtualAddaCard* card,
                   const CalibrationTable* table) {
  validate(opts, plant, controller, card, table);

  const TimeBase& tb = opts.timebase;
  const bool paced = tb.pacing == Pacing::kWallClockPaced;
  RateSpec schedule("controller", opts.controller_period_s, tb.base_step_s);

  const auto charge_cycle = [&] { spin_for(opts.cycle_cost_s); };
  const auto advance = [&] {
    card->advance_cycle();
    charge_cycle();
  };

  if (opts.mode == RunMode::kRt) {
    hardwire(*card, kLoopbackWires);
  } else if (opts.mode == RunMode::kHil) {
    // Sensor goes out through the card's DAC; the actuator input is driven
    // by the external controller.
    card->bind_loopback(kSensorChannel, kSensorChannel);
    card->unbind(kActuatorChannel);
    card->drive_input(kActuatorChannel, 0.0);
  }

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(tb.n_steps));
  std::int64_t tolerance_failures = 0;
  std::int64_t controller_runs = 0;

  double u_cmd = 0.0;
  int u_code_held = 0;
  bool ctrl_saturated = false;
  double y_read_held = 0.0;
  int y_code_held = -1;

  const auto run_start = Clock::now();
  auto step_start = run_start;

  for (std::int64_t k = 0; k < tb.n_steps; ++k) {
    TraceRecord rec;
    rec.step = k;
    rec.t_sim_s = tb.sim_time(k);
    rec.r_V = reference.at(rec.t_sim_s);
    rec.y_plant_V = plant.last_output_V;

    // Sensor path.
    switch (opts.mode) {
      case RunMode::kSim:
        rec.y_read_V = rec.y_plant_V;
        break;
      case RunMode::kRt: {
        const CorrectedWrite w = corrected_write(*card, kSensorChannel, rec.y_plant_V, *table);
        advance();
        const CompensatedRead cr = read_compensated(*card, kSensorChannel, w.expected_V,
                                                    opts.tol_frac, opts.max_retries, charge_cycle);
        rec.y_read_V = cr.value_V;
        rec.y_code = cr.code;
        rec.retries += cr.retries;
        tolerance_failures += cr.tolerance_met ? 0 : 1;
        break;
      }
      case RunMode::kHil:
        corrected_write(*card, kSensorChannel, rec.y_plant_V, *table);
        advance();
        rec.y_read_V = y_read_held;
        rec.y_code = y_code_held;
        break;
    }

    // Controller block.
    if (schedule.fire(k)) {
      ++controller_runs;
      if (opts.mode == RunMode::kHil) {
        y_code_held = card->adc_read(kSensorChannel);
        y_read_held = dequantize(y_code_held, card->config());
        rec.y_code = y_code_held;
        rec.y_read_V = y_read_held;
        const HilEndpoint::RoundTrip rt =
            std::get<HilEndpoint*>(controller)->round_trip(y_code_held, static_cast<std::uint32_t>(k));
        rec.overrun = rt.timed_out;
        u_code_held = rt.u_code;
        u_cmd = dequantize(u_code_held, card->config());
        card->drive_input(kActuatorChannel, u_cmd);
        ctrl_saturated = false;
      } else {
        ControlLaw* law = std::get<ControlLaw*>(controller);
        u_cmd = law->step(rec.r_V, rec.y_read_V);
        ctrl_saturated = law->saturated();
      }
    }
    rec.u_cmd_V = u_cmd;
    rec.saturated = ctrl_saturated;

    // Actuator path.
    switch (opts.mode) {
      case RunMode::kSim:
        rec.u_actual_V = u_cmd;
        break;
      case RunMode::kRt: {
        const CorrectedWrite w = corrected_write(*card, kActuatorChannel, u_cmd, *table);
        advance();
        const CompensatedRead cr = read_compensated(*card, kActuatorChannel, w.expected_V,
                                                    opts.tol_frac, opts.max_retries, charge_cycle);
        rec.u_code = w.code_sent;
        rec.u_actual_V = cr.value_V;
        rec.saturated = rec.saturated || w.saturated;
        rec.retries += cr.retries;
        tolerance_failures += cr.tolerance_met ? 0 : 1;
        break;
      }
      case RunMode::kHil:
        rec.u_code = u_code_held;
        rec.u_actual_V = dequantize(card->adc_read(kActuatorChannel), card->config());
        break;
    }

    plant_step(plant, rec.u_actual_V);
    rec.e_V = rec.r_V - rec.y_read_V;

    if (paced) {
      const auto deadline = run_start + std::chrono::duration_cast<Clock::duration>(
                                            std::chrono::duration<double>((k + 1) * tb.base_step_s));
      if (!pace(deadline).met) rec.overrun = true;
    }
    const auto now = Clock::now();
    rec.wall_dt_ms = std::chrono::duration<double, std::milli>(now - step_start).count();
    step_start = now;
    result.trace.push_back(rec);
  }

  result.report = summarize(result.trace);
  result.report.tolerance_failures = tolerance_failures;
  result.report.controller_runs = controller_runs;
  return result;
}

}  // namespace hilsim
