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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "hilsim/calibration.hpp"
#include "hilsim/executor.hpp"
#include "hilsim/pacing.hpp"
#include "hilsim/plant.hpp"

namespace hilsim {
namespace {

using std::chrono::milliseconds;

// Oracle: the first base step whose time is at or after each due time n*P,
// found by scanning steps on an integer microsecond grid.
std::vector<std::int64_t> due_steps_by_scan(std::int64_t period_us, std::int64_t base_us,
                                            std::int64_t n_steps) {
  std::vector<std::int64_t> out;
  std::int64_t due = 0;
  for (std::int64_t k = 0; k < n_steps; ++k) {
    if (k * base_us >= due) {
      out.push_back(k);
      while (due <= k * base_us) due += period_us;
    }
  }
  return out;
}

TEST(RateSpec, OneSecondOverFortyFiveMs) {
  RateSpec rs("ctl", 1.0, 0.045);
  std::vector<std::int64_t> fired;
  for (std::int64_t k = 0; k < 1000; ++k)
    if (rs.fire(k)) fired.push_back(k);
  ASSERT_GE(fired.size(), 4u);
  EXPECT_EQ(fired[0], 0);
  EXPECT_EQ(fired[1], 23);
  EXPECT_EQ(fired[2], 45);
  EXPECT_EQ(fired[3], 67);
  EXPECT_EQ(fired, due_steps_by_scan(1000000, 45000, 1000));
}

TEST(RateSpec, MatchesScanOracleForSeveralRatios) {
  for (auto [p, b] : {std::pair{100000, 45000}, {250000, 10000}, {45000, 45000}, {1000000, 30000},
                      {333000, 20000}}) {
    RateSpec rs("ctl", p * 1e-6, b * 1e-6);
    std::vector<std::int64_t> fired;
    for (std::int64_t k = 0; k < 2000; ++k)
      if (rs.fire(k)) fired.push_back(k);
    EXPECT_EQ(fired, due_steps_by_scan(p, b, 2000)) << p << "/" << b;
  }
}

TEST(RateSpec, LateCallerFiresOnce) {
  RateSpec rs("ctl", 1.0, 0.045);
  EXPECT_TRUE(rs.fire(0));
  EXPECT_TRUE(rs.fire(100));
  EXPECT_FALSE(rs.fire(101));
  EXPECT_EQ(rs.next_due_step(), 112);
  EXPECT_THROW(RateSpec("x", 0.01, 0.045), std::invalid_argument);
}

CardConfig delay_only_card(int cycles) {
  CardConfig cfg = CardConfig::ideal(3);
  cfg.delay_model = DelayModel::fixed(cycles);
  return cfg;
}

TEST(ReadCompensated, ConvergesAfterExactlyTheDelay) {
  const CardConfig cfg = delay_only_card(5);
  const CalibrationTable table = calibrate(cfg);
  VirtualAddaCard card(cfg);
  card.bind_loopback(0, 0);
  const CorrectedWrite w = corrected_write(card, 0, 3.0, table);
  int cycles = 0;
  const CompensatedRead r = read_compensated(card, 0, w.expected_V, 0.02, 20, [&] { ++cycles; });
  EXPECT_EQ(r.retries, 5);
  EXPECT_EQ(cycles, 5);
  EXPECT_TRUE(r.tolerance_met);
  EXPECT_LE(std::abs(r.value_V - 3.0), 0.02 * 3.0);
}

TEST(ReadCompensated, GivesUpAfterMaxRetries) {
  const CardConfig cfg = delay_only_card(10);
  VirtualAddaCard card(cfg);
  card.bind_loopback(0, 0);
  card.dac_write(0, 200);
  const CompensatedRead r = read_compensated(card, 0, dequantize(200, cfg), 0.02, 4);
  EXPECT_EQ(r.retries, 4);
  EXPECT_FALSE(r.tolerance_met);
  EXPECT_EQ(r.code, 0);
}

TEST(ReadCompensated, ToleranceFloorNearZero) {
  EXPECT_TRUE(within_tolerance(0.0, 0.0, 0.02));
  EXPECT_TRUE(within_tolerance(0.001, 0.0, 0.02));
  EXPECT_FALSE(within_tolerance(0.002, 0.0, 0.02));
  EXPECT_TRUE(within_tolerance(4.41, 4.5, 0.02));
  EXPECT_FALSE(within_tolerance(4.40, 4.5, 0.02));
}

LoopOptions fast(RunMode mode, double base, std::int64_t n, double ctl_period) {
  LoopOptions o;
  o.mode = mode;
  o.timebase = {base, n, Pacing::kAsFastAsPossible};
  o.controller_period_s = ctl_period;
  return o;
}

TEST(RunLoop, StaticGainPassThroughHasOneStepLatency) {
  PlantInstance plant = make_plant(static_gain_plant(2.0), 0.045);
  PassThroughLaw law;
  const ReferenceSignal ref{ReferenceKind::kStep, 1.0, 0.1, 0.0};
  const RunResult res = run_loop(fast(RunMode::kSim, 0.045, 10, 0.045), ref, plant, &law, nullptr, nullptr);
  ASSERT_EQ(res.trace.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) {
    const auto& rec = res.trace[k];
    EXPECT_EQ(rec.step, static_cast<std::int64_t>(k));
    EXPECT_DOUBLE_EQ(rec.t_sim_s, 0.045 * k);
    EXPECT_DOUBLE_EQ(rec.r_V, k >= 3 ? 1.0 : 0.0);
    EXPECT_DOUBLE_EQ(rec.u_cmd_V, rec.r_V);
    EXPECT_DOUBLE_EQ(rec.y_plant_V, k >= 4 ? 2.0 : 0.0);
    EXPECT_EQ(rec.u_code, -1);
    EXPECT_EQ(rec.y_code, -1);
  }
  EXPECT_EQ(res.report.steps_total, 10);
  EXPECT_EQ(res.report.controller_runs, 10);
}

TEST(RunLoop, IdealCardMatchesSimWithinOneLsb) {
  const CardConfig cfg = CardConfig::ideal(9);
  const CalibrationTable table = calibrate(cfg);
  const ReferenceSignal ref{ReferenceKind::kStep, 1.0, 1.0, 0.0};
  const PidGains gains{2.0, 0.2, 1.0, 0.0, 4.5};

  PlantInstance p1 = make_plant(heat_exchanger_plant(), 0.045);
  PidController c1(gains, 0.045);
  const RunResult sim = run_loop(fast(RunMode::kSim, 0.045, 800, 0.045), ref, p1, &c1, nullptr, nullptr);

  PlantInstance p2 = make_plant(heat_exchanger_plant(), 0.045);
  PidController c2(gains, 0.045);
  VirtualAddaCard card(cfg);
  const RunResult rt = run_loop(fast(RunMode::kRt, 0.045, 800, 0.045), ref, p2, &c2, &card, &table);

  for (std::size_t k = 0; k < 800; ++k) {
    EXPECT_LE(std::abs(sim.trace[k].y_plant_V - rt.trace[k].y_plant_V), cfg.lsb_V()) << k;
    EXPECT_EQ(rt.trace[k].retries, 0);
  }
}

TEST(RunLoop, DefectsAddRetriesAndDeviation) {
  CardConfig cfg;
  cfg.rng_seed = 4;
  const CalibrationTable table = calibrate(cfg);
  const ReferenceSignal ref{ReferenceKind::kStep, 1.0, 1.0, 0.0};
  const PidGains gains{2.0, 0.2, 1.0, 0.0, 4.5};
  PlantInstance p1 = make_plant(heat_exchanger_plant(), 0.045);
  PidController c1(gains, 0.045);
  const RunResult sim = run_loop(fast(RunMode::kSim, 0.045, 600, 0.045), ref, p1, &c1, nullptr, nullptr);
  PlantInstance p2 = make_plant(heat_exchanger_plant(), 0.045);
  PidController c2(gains, 0.045);
  VirtualAddaCard card(cfg);
  const RunResult rt = run_loop(fast(RunMode::kRt, 0.045, 600, 0.045), ref, p2, &c2, &card, &table);
  EXPECT_GT(rt.report.max_retries, 0);
  EXPECT_GT(rms_deviation(sim.trace, rt.trace), 0.0);
}

TEST(RunLoop, DeterministicForSameSeed) {
  CardConfig cfg;
  cfg.rng_seed = 77;
  const CalibrationTable table = calibrate(cfg);
  const ReferenceSignal ref{ReferenceKind::kSquare, 1.5, 0.0, 5.0};
  std::vector<RunResult> runs;
  for (int i = 0; i < 2; ++i) {
    PlantInstance p = make_plant(heat_exchanger_plant(), 0.045);
    PidController c({2.0, 0.2, 1.0, 0.0, 4.5}, 0.045);
    VirtualAddaCard card(cfg);
    runs.push_back(run_loop(fast(RunMode::kRt, 0.045, 400, 0.045), ref, p, &c, &card, &table));
  }
  for (std::size_t k = 0; k < 400; ++k) {
    auto a = runs[0].trace[k], b = runs[1].trace[k];
    a.wall_dt_ms = b.wall_dt_ms = 0.0;
    EXPECT_EQ(a, b) << k;
  }
}

TEST(RunLoop, MultiRateHoldsControlBetweenDueSteps) {
  const CardConfig cfg = CardConfig::ideal(1);
  const CalibrationTable table = calibrate(cfg);
  const DiscreteLtiD model = c2d_zoh(heat_exchanger_plant().tf, 1.0);
  RstController law(design_rst(model.a(), model.b(), model.delay_d(),
                               Poly({1.0, -0.7}) * Poly({1.0, -0.7})),
                    OutputLimits{0.0, 4.5});
  PlantInstance plant = make_plant(heat_exchanger_plant(), 0.045);
  VirtualAddaCard card(cfg);
  const ReferenceSignal ref{ReferenceKind::kStep, 1.0, 0.0, 0.0};
  const RunResult res = run_loop(fast(RunMode::kRt, 0.045, 1000, 1.0), ref, plant, &law, &card, &table);
  const auto due = due_steps_by_scan(1000000, 45000, 1000);
  std::set<std::int64_t> due_set(due.begin(), due.end());
  for (std::size_t k = 1; k < res.trace.size(); ++k) {
    if (!due_set.count(static_cast<std::int64_t>(k))) {
      EXPECT_EQ(res.trace[k].u_cmd_V, res.trace[k - 1].u_cmd_V) << k;
      EXPECT_EQ(res.trace[k].u_code, res.trace[k - 1].u_code) << k;
    }
  }
  EXPECT_EQ(res.report.controller_runs, static_cast<std::int64_t>(due.size()));
}

TEST(RunLoop, RejectsInconsistentSetup) {
  PlantInstance plant = make_plant(static_gain_plant(), 0.045);
  PassThroughLaw law;
  const ReferenceSignal ref;
  EXPECT_THROW(run_loop(fast(RunMode::kRt, 0.045, 5, 0.045), ref, plant, &law, nullptr, nullptr),
               std::invalid_argument);
  EXPECT_THROW(run_loop(fast(RunMode::kSim, 0.01, 5, 0.01), ref, plant, &law, nullptr, nullptr),
               std::invalid_argument);
  EXPECT_THROW(run_loop(fast(RunMode::kSim, 0.045, 5, 0.01), ref, plant, &law, nullptr, nullptr),
               std::invalid_argument);
  EXPECT_THROW(run_loop(fast(RunMode::kHil, 0.045, 5, 0.045), ref, plant, &law, nullptr, nullptr),
               std::invalid_argument);
}

TEST(Pace, MeetsDeadlineAhead) {
  const auto start = Clock::now();
  const PaceResult r = pace(start + milliseconds(10));
  const double dt = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  EXPECT_TRUE(r.met);
  EXPECT_GE(dt, 10.0);
  EXPECT_LE(dt, 12.0);
}

TEST(Pace, ReportsLatenessForPastDeadline) {
  const PaceResult r = pace(Clock::now() - milliseconds(3));
  EXPECT_FALSE(r.met);
  EXPECT_NEAR(r.lateness_ms, 3.0, 0.5);
}

TEST(RunLoop, FastModeNeverOverruns) {
  PlantInstance plant = make_plant(heat_exchanger_plant(), 0.045);
  PassThroughLaw law;
  const RunResult res = run_loop(fast(RunMode::kSim, 0.045, 2000, 0.045), {}, plant, &law, nullptr, nullptr);
  EXPECT_EQ(res.report.overruns, 0);
}

// Delay-vs-step stress: each rt step performs two card round trips of D
// cycles each, so real time holds when 2*D*c fits in the base step.
RunReport stress_run(double cycle_cost_s) {
  CardConfig cfg = CardConfig::ideal(1);
  cfg.delay_model = DelayModel::fixed(5);
  const CalibrationTable table = calibrate(cfg);
  VirtualAddaCard card(cfg);
  PlantInstance plant = make_plant(static_gain_plant(1.0), 0.045);
  PassThroughLaw law;
  LoopOptions o = fast(RunMode::kRt, 0.045, 40, 0.045);
  o.timebase.pacing = Pacing::kWallClockPaced;
  o.cycle_cost_s = cycle_cost_s;
  // The reference toggles every step so both paths wait out the full delay.
  return run_loop(o, {ReferenceKind::kSquare, 2.0, 0.0, 0.09}, plant, &law, &card, &table).report;
}

TEST(RunLoopStress, OverrunsExactlyWhenDelayExceedsBudget) {
  const RunReport ok = stress_run(0.002);
  EXPECT_EQ(ok.max_retries, 8);
  EXPECT_EQ(stress_run(0.002).overruns, 0);  // 2*5*2 ms = 20 ms < 45 ms
  EXPECT_GT(stress_run(0.006).overruns, 0);  // 2*5*6 ms = 60 ms > 45 ms
}

}  // namespace
}  // namespace hilsim
