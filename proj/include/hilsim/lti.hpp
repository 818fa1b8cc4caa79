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

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hilsim/polynomial.hpp"

namespace hilsim {

// Continuous transfer function num(s)/den(s) * exp(-dead_time_s * s).
// num and den hold ascending powers of s.
struct ContinuousTf {
  Poly num;
  Poly den;
  double dead_time_s = 0.0;

  // Throws std::invalid_argument unless den != 0, deg(num) <= deg(den) and
  // dead_time_s >= 0.
  void validate() const;
  double dc_gain() const { return num[0] / den[0]; }
};

// Discrete SISO system
//   A(q^-1) y(t) = q^-d B(q^-1) u(t),  a0 = 1
// i.e. y(t) = -sum_{i>=1} a_i y(t-i) + sum_{j>=0} b_j u(t-d-j).
template <typename Scalar>
class DiscreteLti {
 public:
  using PolyT = Polynomial<Scalar>;

  DiscreteLti(PolyT b, PolyT a, int delay_d, double period_s)
      : b_(std::move(b)), a_(std::move(a)), delay_d_(delay_d), period_s_(period_s) {
    if (period_s_ <= 0.0) throw std::invalid_argument("period_s must be positive");
    if (delay_d_ < 0) throw std::invalid_argument("delay_d must be non-negative");
    if (a_.is_zero() || a_[0] == Scalar(0)) {
      throw std::invalid_argument("denominator must have a nonzero leading coefficient");
    }
    if (a_[0] != Scalar(1)) {
      const Scalar a0 = a_[0];
      b_ = (Scalar(1) / a0) * b_;
      a_ = (Scalar(1) / a0) * a_;
    }
    past_u_.assign(static_cast<std::size_t>(b_.degree() + delay_d_), Scalar(0));
    past_y_.assign(static_cast<std::size_t>(a_.degree()), Scalar(0));
  }

  const PolyT& b() const { return b_; }
  const PolyT& a() const { return a_; }
  int delay_d() const { return delay_d_; }
  double period_s() const { return period_s_; }

  // B(1)/A(1).
  Scalar dc_gain() const { return b_.at_one() / a_.at_one(); }

  // Past samples kept between steps: deg(B) + d inputs and deg(A) outputs.
  std::size_t history_length() const { return past_u_.size() + past_y_.size(); }

  // Consumes u(t), returns y(t).
  Scalar step(Scalar u) {
    Scalar y(0);
    for (Eigen::Index i = 1; i <= a_.degree(); ++i) y -= a_[i] * past_y_[static_cast<std::size_t>(i - 1)];
    for (Eigen::Index j = 0; j <= b_.degree(); ++j) {
      const Eigen::Index lag = delay_d_ + j;  // u(t - lag)
      y += b_[j] * (lag == 0 ? u : past_u_[static_cast<std::size_t>(lag - 1)]);
    }
    push_front(past_u_, u);
    push_front(past_y_, y);
    return y;
  }

  void reset() {
    std::fill(past_u_.begin(), past_u_.end(), Scalar(0));
    std::fill(past_y_.begin(), past_y_.end(), Scalar(0));
  }

  // Fills the histories so the system sits at rest with output y0.
  void reset_to_steady_state(Scalar y0) {
    const Scalar g = dc_gain();
    if (g == Scalar(0)) throw std::invalid_argument("zero dc gain has no steady state for nonzero output");
    std::fill(past_u_.begin(), past_u_.end(), y0 / g);
    std::fill(past_y_.begin(), past_y_.end(), y0);
  }

 private:
  static void push_front(std::vector<Scalar>& h, Scalar v) {
    if (h.empty()) return;
    std::rotate(h.rbegin(), h.rbegin() + 1, h.rend());
    h.front() = v;
  }

  PolyT b_;
  PolyT a_;
  int delay_d_;
  double period_s_;
  std::vector<Scalar> past_u_;  // u(t-1), u(t-2), ...
  std::vector<Scalar> past_y_;  // y(t-1), y(t-2), ...
};

using DiscreteLtiD = DiscreteLti<double>;

// Zero-order-hold discretization, exact for up to second-order denominators
// (real, repeated or complex-conjugate poles, including poles at the origin).
// Dead time is rounded to a whole number of samples.
//
// Throws std::invalid_argument for improper systems or period_s <= 0 and
// std::domain_error for denominators above second order.
DiscreteLtiD c2d_zoh(const ContinuousTf& g, double period_s);

}  // namespace hilsim
