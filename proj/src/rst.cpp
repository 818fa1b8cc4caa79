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

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hilsim/controllers.hpp"

namespace hilsim {

namespace {

constexpr double kPivotThreshold = 1e-10;
constexpr double kResidualLimit = 1e-9;

std::string degrees(const Poly& a, const Poly& b, int d, const Poly& p) {
  std::ostringstream os;
  os << "deg A = " << a.degree() << ", deg B = " << b.degree() << ", d = " << d
     << ", deg P = " << p.degree();
  return os.str();
}

}  // namespace

DiophantineSolution solve_diophantine(const Poly& a, const Poly& b, int d, const Poly& p) {
  if (d < 0) throw std::invalid_argument("delay d must be non-negative");
  if (std::abs(a[0] - 1.0) > kCoeffTolerance) throw std::invalid_argument("A must be monic (a0 = 1)");
  if (std::abs(p[0] - 1.0) > kCoeffTolerance) throw std::invalid_argument("P must be monic (p0 = 1)");
  if (b.is_zero()) throw SingularSylvester("B is the zero polynomial; " + degrees(a, b, d, p));

  const Poly bd = shift(b, d);
  const int deg_a = static_cast<int>(a.degree());
  const int deg_bd = static_cast<int>(bd.degree());
  if (deg_bd == 0) {
    throw std::invalid_argument("q^-d B has no delay at all; the loop would be algebraic");
  }
  const int ns = deg_bd - 1;
  const int nr = deg_a - 1;
  const int n = deg_a + deg_bd - 1;
  if (p.degree() > n) {
    std::ostringstream os;
    os << "deg P = " << p.degree() << " exceeds deg A + deg B + d - 1 = " << n << "; "
       << degrees(a, b, d, p);
    throw DegreeTooHigh(os.str());
  }

  // Columns: s0..s_ns, r0..r_nr. Rows: coefficients of q^0..q^-n.
  const int size = n + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (int j = 0; j <= ns; ++j) m.col(j).segment(j, deg_a + 1) = a.coeffs();
  for (int j = 0; j <= nr; ++j) m.col(ns + 1 + j).segment(j, deg_bd + 1) = bd.coeffs();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs.head(p.size()) = p.coeffs();

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < kPivotThreshold || lu.rcond() < kPivotThreshold) {
    throw SingularSylvester("Sylvester matrix is singular (A and q^-d B share a factor); " +
                            degrees(a, b, d, p));
  }
  const Eigen::VectorXd x = lu.solve(rhs);

  DiophantineSolution sol{Poly(Poly::Coeffs(x.head(ns + 1))),
                          nr >= 0 ? Poly(Poly::Coeffs(x.segment(ns + 1, nr + 1))) : Poly()};
  if (std::abs(sol.s[0] - 1.0) > kResidualLimit) {
    throw std::invalid_argument(
        "solution has a non-monic S; q^-d B must have a zero constant term");
  }
  const double residual = max_abs_diff(a * sol.s + bd * sol.r, p);
  if (residual > kResidualLimit) {
    throw SingularSylvester("Sylvester system too ill-conditioned (residual " +
                            std::to_string(residual) + "); " + degrees(a, b, d, p));
  }
  return sol;
}

std::string to_string(TMode m) {
  return m == TMode::kPaperLiteral ? "paper_literal" : "unit_dc_gain";
}

TMode tmode_from_string(const std::string& s) {
  if (s == "paper_literal") return TMode::kPaperLiteral;
  if (s == "unit_dc_gain") return TMode::kUnitDcGain;
  throw std::invalid_argument("unknown t_mode '" + s + "' (expected paper_literal or unit_dc_gain)");
}

double RstDesign::residual() const { return max_abs_diff(a * s + shift(b, d) * r, p); }

RstDesign design_rst(const Poly& a, const Poly& b, int d, const Poly& p, TMode t_mode) {
  const double b1 = b.at_one();
  if (std::abs(b1) <= kCoeffTolerance) throw ZeroStaticGain("B(1) = 0: the plant has no static gain");
  DiophantineSolution sol = solve_diophantine(a, b, d, p);
  RstDesign design{a, b, d, p, std::move(sol.r), std::move(sol.s), Poly(), t_mode};
  design.t = t_mode == TMode::kPaperLiteral ? (1.0 / b1) * (a * p) : (1.0 / b1) * p;
  return design;
}

RstController::RstController(RstDesign design, std::optional<OutputLimits> limits)
    : design_(std::move(design)), limits_(limits) {
  if (limits_ && !(limits_->min_V < limits_->max_V)) {
    throw std::invalid_argument("RST output limits require min_V < max_V");
  }
  reset();
}

void RstController::reset() {
  r_hist_.assign(static_cast<std::size_t>(design_.t.degree() + 1), 0.0);
  y_hist_.assign(static_cast<std::size_t>(design_.r.degree() + 1), 0.0);
  u_hist_.assign(static_cast<std::size_t>(design_.s.degree()), 0.0);
  saturated_ = false;
}

namespace {

void push_front(std::vector<double>& h, double v) {
  if (h.empty()) return;
  std::rotate(h.rbegin(), h.rbegin() + 1, h.rend());
  h.front() = v;
}

}  // namespace

double RstController::step(double r_V, double y_V) {
  push_front(r_hist_, r_V);
  push_front(y_hist_, y_V);
  const Poly& t = design_.t;
  const Poly& r = design_.r;
  const Poly& s = design_.s;

  double acc = 0.0;
  for (Eigen::Index i = 0; i <= t.degree(); ++i) acc += t[i] * r_hist_[i];
  for (Eigen::Index i = 0; i <= r.degree(); ++i) acc -= r[i] * y_hist_[i];
  for (Eigen::Index i = 1; i <= s.degree(); ++i) acc -= s[i] * u_hist_[i - 1];
  double u = acc / s[0];

  saturated_ = false;
  if (limits_) {
    saturated_ = u < limits_->min_V || u > limits_->max_V;
    u = std::clamp(u, limits_->min_V, limits_->max_V);
  }
  push_front(u_hist_, u);
  return u;
}

}  // namespace hilsim
