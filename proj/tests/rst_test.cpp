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
#include <random>

#include "closed_loop_oracle.hpp"
#include "hilsim/controllers.hpp"
#include "hilsim/lti.hpp"
#include "hilsim/plant.hpp"

namespace hilsim {
namespace {

const Poly kA({1.0, -0.9});
const Poly kB({0.0, 0.5});
const Poly kP({1.0, -0.6});

TEST(Diophantine, WorkedExample) {
  const DiophantineSolution sol = solve_diophantine(kA, kB, 0, kP);
  EXPECT_LE(max_abs_diff(sol.s, Poly::constant(1.0)), 1e-12);
  EXPECT_LE(max_abs_diff(sol.r, Poly::constant(0.6)), 1e-12);
  EXPECT_LE(max_abs_diff(kA * sol.s + kB * sol.r, kP), 1e-9);
}

TEST(Diophantine, TargetAlreadyMet) {
  const Poly a({1.0, -1.2, 0.35});
  const Poly b({0.0, 0.3, 0.1});
  const DiophantineSolution sol = solve_diophantine(a, b, 1, a);
  EXPECT_LE(max_abs_diff(sol.s, Poly::constant(1.0)), 1e-12);
  EXPECT_TRUE(sol.r.is_zero());
}

TEST(Diophantine, CommonFactorIsSingular) {
  EXPECT_THROW(solve_diophantine(Poly({1.0, -1.0}), Poly({1.0, -1.0}), 0, Poly({1.0, -0.5})),
               SingularSylvester);
  EXPECT_THROW(solve_diophantine(Poly({1.0, -0.5}), Poly({0.0, 1.0, -0.5}), 0, Poly({1.0, 0.2})),
               SingularSylvester);
}

TEST(Diophantine, DegreeBound) {
  EXPECT_THROW(solve_diophantine(kA, kB, 0, Poly({1.0, -0.6, 0.09})), DegreeTooHigh);
  EXPECT_NO_THROW(solve_diophantine(kA, kB, 1, Poly({1.0, -0.6, 0.09})));
}

TEST(Diophantine, RejectsNonMonicInputs) {
  EXPECT_THROW(solve_diophantine(Poly({2.0, -0.9}), kB, 0, kP), std::invalid_argument);
  EXPECT_THROW(solve_diophantine(kA, kB, 0, Poly({0.5, -0.6})), std::invalid_argument);
  EXPECT_THROW(solve_diophantine(kA, kB, -1, kP), std::invalid_argument);
}

TEST(DiophantineProperty, RandomRecovery) {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> deg_a(1, 3), deg_b(0, 2), dly(0, 2);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto start = std::chrono::steady_clock::now();
  int done = 0;
  while (done < 100) {
    std::vector<double> a{1.0}, b;
    for (int i = deg_a(rng); i > 0; --i) a.push_back(coef(rng));
    const int d = dly(rng);
    // Keep q^-d B strictly causal.
    if (d == 0) b.push_back(0.0);
    for (int i = deg_b(rng); i >= 0; --i) b.push_back(coef(rng));
    const Poly A(a), B(b), bd = shift(B, d);
    const int ns = static_cast<int>(bd.degree()) - 1, nr = static_cast<int>(A.degree()) - 1;
    std::vector<double> s0{1.0}, r0;
    for (int i = 0; i < ns; ++i) s0.push_back(coef(rng));
    for (int i = 0; i <= nr; ++i) r0.push_back(coef(rng));
    const Poly S0(s0), R0(r0);
    const Poly P = A * S0 + bd * R0;
    const DiophantineSolution sol = solve_diophantine(A, B, d, P);
    EXPECT_LE(max_abs_diff(sol.s, S0), 1e-9) << "instance " << done;
    EXPECT_LE(max_abs_diff(sol.r, R0), 1e-9) << "instance " << done;
    ++done;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(RstDesign, TPolynomialModes) {
  const RstDesign unit = design_rst(kA, kB, 0, kP, TMode::kUnitDcGain);
  EXPECT_LE(max_abs_diff(unit.t, Poly({2.0, -1.2})), 1e-12);
  EXPECT_NEAR(unit.t.at_one() * kB.at_one() / kP.at_one(), 1.0, 1e-12);
  const RstDesign lit = design_rst(kA, kB, 0, kP, TMode::kPaperLiteral);
  EXPECT_LE(max_abs_diff(lit.t, Poly({2.0, -3.0, 1.08})), 1e-12);
  EXPECT_LE(unit.residual(), 1e-9);
}

TEST(RstDesign, ZeroStaticGain) {
  EXPECT_THROW(design_rst(kA, Poly({0.0, 1.0, -1.0}), 0, kP), ZeroStaticGain);
}

TEST(RstDesign, TModeStrings) {
  EXPECT_EQ(to_string(TMode::kPaperLiteral), "paper_literal");
  EXPECT_EQ(tmode_from_string("unit_dc_gain"), TMode::kUnitDcGain);
  EXPECT_THROW(tmode_from_string("literal"), std::invalid_argument);
}

TEST(RstController, ZeroInZeroOut) {
  RstController c(design_rst(kA, kB, 0, kP));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(c.step(0.0, 0.0), 0.0);
}

TEST(RstController, PassThroughDesign) {
  RstDesign d;
  d.r = Poly();
  d.s = Poly::constant(1.0);
  d.t = Poly::constant(1.0);
  RstController c(d);
  for (double r : {0.3, -1.0, 2.5}) EXPECT_DOUBLE_EQ(c.step(r, 9.0), r);
}

TEST(RstController, ControlLawHoldsEachSample) {
  const Poly a({1.0, -1.5, 0.56});
  const Poly b({0.0, 0.2, 0.1});
  const RstDesign d = design_rst(a, b, 1, Poly({1.0, -1.0, 0.25}));
  RstController c(d);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  std::vector<double> r, y, u;
  for (int t = 0; t < 50; ++t) {
    r.push_back(n01(rng));
    y.push_back(n01(rng));
    u.push_back(c.step(r.back(), y.back()));
    double lhs = 0.0, rhs = 0.0;
    for (Eigen::Index i = 0; i <= d.s.degree(); ++i) if (t >= i) lhs += d.s[i] * u[t - i];
    for (Eigen::Index i = 0; i <= d.t.degree(); ++i) if (t >= i) rhs += d.t[i] * r[t - i];
    for (Eigen::Index i = 0; i <= d.r.degree(); ++i) if (t >= i) rhs -= d.r[i] * y[t - i];
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(RstController, ClampsToLimits) {
  RstController c(design_rst(kA, kB, 0, kP), OutputLimits{0.0, 4.5});
  EXPECT_DOUBLE_EQ(c.step(10.0, 0.0), 4.5);
  EXPECT_TRUE(c.saturated());
  EXPECT_DOUBLE_EQ(c.step(-10.0, 0.0), 0.0);
  c.reset();
  EXPECT_DOUBLE_EQ(c.step(0.1, 0.0), 0.2);
  EXPECT_FALSE(c.saturated());
}

TEST(RstClosedLoop, WorkedExampleRegulationPole) {
  // Regulation transient from a single disturbance pulse decays by the pole of P.
  const RstDesign d = design_rst(kA, kB, 0, kP);
  std::vector<double> r(20, 0.0), v(20, 0.0);
  v[0] = 1.0;
  const auto s = testing::simulate_rst_loop(d, r, v);
  for (int t = 2; t < 20; ++t) EXPECT_NEAR(s.y[t] / s.y[t - 1], 0.6, 1e-12);
}

TEST(RstClosedLoop, RealizedDenominatorMatchesP) {
  const RstDesign worked = design_rst(kA, kB, 0, kP);
  const auto den = testing::realized_denominator(worked, 1);
  ASSERT_EQ(den.size(), 2u);
  EXPECT_NEAR(den[1], -0.6, 1e-6);

  const DiscreteLtiD plant = c2d_zoh(heat_exchanger_plant().tf, 1.0);
  const Poly p = Poly({1.0, -0.7}) * Poly({1.0, -0.7});
  const RstDesign he = design_rst(plant.a(), plant.b(), plant.delay_d(), p);
  const auto den2 = testing::realized_denominator(he, 2);
  ASSERT_EQ(den2.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(den2[i], p[i], 1e-6);
}

TEST(RstClosedLoop, UnitStepTrackingAfterFiftySamples) {
  const RstDesign d = design_rst(kA, kB, 0, kP, TMode::kUnitDcGain);
  const auto s = testing::simulate_rst_loop(d, std::vector<double>(80, 1.0), std::vector<double>(80, 0.0));
  for (int t = 50; t < 80; ++t) EXPECT_LT(std::abs(s.y[t] - 1.0), 1e-4);
  const RstDesign lit = design_rst(kA, kB, 0, kP, TMode::kPaperLiteral);
  const auto s2 = testing::simulate_rst_loop(lit, std::vector<double>(80, 1.0), std::vector<double>(80, 0.0));
  EXPECT_NEAR(s2.y.back(), lit.t.at_one() * kB.at_one() / kP.at_one(), 1e-6);
}

}  // namespace
}  // namespace hilsim
