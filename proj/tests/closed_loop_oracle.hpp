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

// Closed-loop oracle for RST designs: an independent plant recursion with
// explicit histories, plus a least-squares fit of the realized loop.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "hilsim/controllers.hpp"

namespace hilsim::testing {

struct LoopSignals {
  std::vector<double> r, v, u, y;
};

// Runs A y = q^-d B (u + v) against the controller. q^-d B must have a zero
// constant term so y(t) only depends on past inputs.
inline LoopSignals simulate_rst_loop(const RstDesign& design, const std::vector<double>& r,
                                     const std::vector<double>& v) {
  RstController ctl(design);
  const Poly bd = shift(design.b, design.d);
  const auto n = r.size();
  LoopSignals s{r, v, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t t = 0; t < n; ++t) {
    double y = 0.0;
    for (Eigen::Index i = 1; i <= design.a.degree(); ++i)
      if (t >= static_cast<std::size_t>(i)) y -= design.a[i] * s.y[t - i];
    for (Eigen::Index j = 1; j <= bd.degree(); ++j)
      if (t >= static_cast<std::size_t>(j)) y += bd[j] * (s.u[t - j] + s.v[t - j]);
    s.y[t] = y;
    s.u[t] = ctl.step(r[t], y);
  }
  return s;
}

// Fits y(t) = -sum p_i y(t-i) + sum g_j r(t-j) + sum h_j v(t-j) and returns
// the monic denominator [1, p_1, ..., p_np].
inline std::vector<double> fit_closed_loop_denominator(const LoopSignals& s, int np, int nr, int nv) {
  const int lag = std::max({np, nr, nv});
  const int rows = static_cast<int>(s.y.size()) - lag;
  const int cols = np + (nr + 1) + (nv + 1);
  Eigen::MatrixXd phi(rows, cols);
  Eigen::VectorXd target(rows);
  for (int k = 0; k < rows; ++k) {
    const int t = k + lag;
    int c = 0;
    for (int i = 1; i <= np; ++i) phi(k, c++) = -s.y[t - i];
    for (int j = 0; j <= nr; ++j) phi(k, c++) = s.r[t - j];
    for (int j = 0; j <= nv; ++j) phi(k, c++) = s.v[t - j];
    target(k) = s.y[t];
  }
  const Eigen::VectorXd theta = phi.colPivHouseholderQr().solve(target);
  std::vector<double> den{1.0};
  for (int i = 0; i < np; ++i) den.push_back(theta(i));
  return den;
}

// Realized denominator of a designed loop, driven by random reference and
// input-disturbance sequences.
inline std::vector<double> realized_denominator(const RstDesign& design, std::uint64_t seed,
                                                int samples = 400) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> r(samples), v(samples);
  for (double& x : r) x = n01(rng);
  for (double& x : v) x = n01(rng);
  const LoopSignals s = simulate_rst_loop(design, r, v);
  const int bd = static_cast<int>(shift(design.b, design.d).degree());
  return fit_closed_loop_denominator(s, static_cast<int>(design.p.degree()),
                                     bd + static_cast<int>(design.t.degree()),
                                     bd + static_cast<int>(design.s.degree()));
}

}  // namespace hilsim::testing
