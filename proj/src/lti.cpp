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

#include "hilsim/lti.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace hilsim {

void ContinuousTf::validate() const {
  if (den.is_zero()) throw std::invalid_argument("transfer function denominator is zero");
  if (num.degree() > den.degree()) {
    std::ostringstream os;
    os << "improper transfer function: deg(num) = " << num.degree()
       << " > deg(den) = " << den.degree();
    throw std::invalid_argument(os.str());
  }
  if (!(dead_time_s >= 0.0)) throw std::invalid_argument("dead_time_s must be >= 0");
}

namespace {

using cplx = std::complex<double>;

// Rational function in q^-1 with complex coefficients.
struct Rational {
  ComplexPoly num;
  ComplexPoly den;
};

Rational operator+(const Rational& x, const Rational& y) {
  return {x.num * y.den + y.num * x.den, x.den * y.den};
}

// ZOH image of r / (s - p).
Rational zoh_simple_pole(cplx r, cplx p, double T) {
  if (p == cplx(0.0)) {
    return {ComplexPoly({0.0, r * T}), ComplexPoly({1.0, -1.0})};
  }
  const cplx a = std::exp(p * T);
  return {ComplexPoly({0.0, r / p * (a - 1.0)}), ComplexPoly({1.0, -a})};
}

// ZOH image of r / (s - p)^2.
Rational zoh_double_pole(cplx r, cplx p, double T) {
  if (p == cplx(0.0)) {
    return {ComplexPoly({0.0, r * T * T / 2.0, r * T * T / 2.0}), ComplexPoly({1.0, -2.0, 1.0})};
  }
  const cplx a = std::exp(p * T);
  const ComplexPoly one_minus_a_q({1.0, -a});
  // r [ (1-a) q^-1 (1 - a q^-1) / p^2 + T a q^-1 (1 - q^-1) / p ] / (1 - a q^-1)^2
  const ComplexPoly n1 = ((1.0 - a) / (p * p)) * (ComplexPoly({0.0, 1.0}) * one_minus_a_q);
  const ComplexPoly n2 = (T * a / p) * ComplexPoly({0.0, 1.0, -1.0});
  return {r * (n1 + n2), one_minus_a_q * one_minus_a_q};
}

ComplexPoly to_complex(const Poly& p) {
  return ComplexPoly(ComplexPoly::Coeffs(p.coeffs().cast<cplx>()));
}

}  // namespace

DiscreteLtiD c2d_zoh(const ContinuousTf& g, double period_s) {
  if (!(period_s > 0.0)) throw std::invalid_argument("period_s must be positive");
  g.validate();
  const int delay_d = static_cast<int>(std::lround(g.dead_time_s / period_s));
  const Eigen::Index n = g.den.degree();
  if (n > 2) {
    throw std::domain_error("c2d_zoh supports denominators up to second order, got order " +
                            std::to_string(n));
  }

  const double lead = g.den[n];
  const double direct = (g.num.degree() == n) ? g.num[n] / lead : 0.0;
  if (n == 0) return DiscreteLtiD(Poly::constant(direct), Poly::constant(1.0), delay_d, period_s);

  // Strictly proper remainder over a monic denominator.
  const Poly rem = g.num - direct * g.den;
  const Poly den = (1.0 / lead) * g.den;
  const Poly num = (1.0 / lead) * rem;

  Rational acc{ComplexPoly::constant(direct), ComplexPoly::constant(1.0)};
  if (n == 1) {
    const cplx p(-den[0]);
    acc = acc + zoh_simple_pole(num[0], p, period_s);
  } else {
    // s^2 + c1 s + c0
    const double c1 = den[1];
    const double c0 = den[0];
    const double disc = c1 * c1 - 4.0 * c0;
    const double scale = std::max({c1 * c1, std::abs(4.0 * c0), 1e-300});
    if (std::abs(disc) <= 1e-10 * scale) {
      const double p = -c1 / 2.0;
      // num = k1 s + k0 = k1 (s - p) + (k0 + k1 p)
      acc = acc + zoh_simple_pole(num[1], p, period_s);
      acc = acc + zoh_double_pole(num[0] + num[1] * p, p, period_s);
    } else {
      const cplx root = std::sqrt(cplx(disc));
      const cplx p1 = (-c1 + root) / 2.0;
      const cplx p2 = (-c1 - root) / 2.0;
      const ComplexPoly cnum = to_complex(num);
      // residue of num / ((s - p1)(s - p2)) at each pole
      acc = acc + zoh_simple_pole(cnum.eval(p1) / (p1 - p2), p1, period_s);
      acc = acc + zoh_simple_pole(cnum.eval(p2) / (p2 - p1), p2, period_s);
    }
  }
  return DiscreteLtiD(real_part(acc.num), real_part(acc.den), delay_d, period_s);
}

}  // namespace hilsim
