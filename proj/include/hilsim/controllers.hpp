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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hilsim/polynomial.hpp"

namespace hilsim {

// One sampled control law: u(t) from the reference and the measurement.
class ControlLaw {
 public:
  virtual ~ControlLaw() = default;
  virtual double step(double r_V, double y_V) = 0;
  // True when the last output was clipped to the actuator limits.
  virtual bool saturated() const { return false; }
  virtual void reset() = 0;
};

// u = r
class PassThroughLaw final : public ControlLaw {
 public:
  double step(double r_V, double) override { return r_V; }
  void reset() override {}
};

// u = y; what an echo peer does across the wire.
class EchoLaw final : public ControlLaw {
 public:
  double step(double, double y_V) override { return y_V; }
  void reset() override {}
};

// ---------------------------------------------------------------------------
// PID

struct PidGains {
  double kp = 1.0;
  double ki = 0.0;  // 1/s
  double kd = 0.0;  // s
  double out_min_V = 0.0;
  double out_max_V = 4.5;

  bool operator==(const PidGains&) const = default;
};

// Parallel PID with derivative on the error and conditional integration:
// while the output is clipped, the integrator is not advanced in the
// direction that would push it further into the limit.
class PidController final : public ControlLaw {
 public:
  PidController(const PidGains& gains, double period_s, bool anti_windup = true);

  double step(double r_V, double y_V) override;
  bool saturated() const override { return saturated_; }
  void reset() override;

  double integral() const { return integral_; }
  const PidGains& gains() const { return gains_; }

 private:
  PidGains gains_;
  double period_s_;
  bool anti_windup_;
  double integral_ = 0.0;
  double prev_error_ = 0.0;
  bool saturated_ = false;
};

// ---------------------------------------------------------------------------
// RST pole placement

class SingularSylvester : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeTooHigh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroStaticGain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiophantineSolution {
  Poly s;
  Poly r;
};

// Minimal-degree solution of A S + q^-d B R = P with
// deg S = deg B + d - 1 and deg R = deg A - 1.
//
// A and P must be monic. q^-d B must have a zero constant term (the plant
// must not respond within the same sample), which is what makes S monic.
// The coefficients come from a dense Sylvester system solved by LU with
// partial pivoting.
DiophantineSolution solve_diophantine(const Poly& a, const Poly& b, int d, const Poly& p);

// How T is formed from P.
enum class TMode {
  kPaperLiteral,  // T = A P / B(1)
  kUnitDcGain,    // T = P / B(1)
};

std::string to_string(TMode m);
TMode tmode_from_string(const std::string& s);

struct RstDesign {
  Poly a, b;
  int d = 0;
  Poly p, r, s, t;
  TMode t_mode = TMode::kUnitDcGain;

  // max |coeff(A S + q^-d B R - P)|
  double residual() const;
};

RstDesign design_rst(const Poly& a, const Poly& b, int d, const Poly& p,
                     TMode t_mode = TMode::kUnitDcGain);

struct OutputLimits {
  double min_V;
  double max_V;
};

// Two-degree-of-freedom law S u = T r - R y. With limits set, the clipped
// value is what enters the u history.
class RstController final : public ControlLaw {
 public:
  explicit RstController(RstDesign design, std::optional<OutputLimits> limits = std::nullopt);

  double step(double r_V, double y_V) override;
  bool saturated() const override { return saturated_; }
  void reset() override;

  const RstDesign& design() const { return design_; }

 private:
  RstDesign design_;
  std::optional<OutputLimits> limits_;
  std::vector<double> r_hist_;  // r(t), r(t-1), ...
  std::vector<double> y_hist_;
  std::vector<double> u_hist_;  // u(t-1), u(t-2), ...
  bool saturated_ = false;
};

}  // namespace hilsim
