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

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace hilsim {

// Coefficients whose magnitude is at or below this are treated as zero when
// trimming trailing terms.
inline constexpr double kCoeffTolerance = 1e-12;

// Polynomial in the unit-delay operator q^-1, stored in ascending powers:
// coeffs = [c0, c1, ..., cn] means c0 + c1 q^-1 + ... + cn q^-n.
//
// The same container is reused for continuous transfer functions, where the
// variable is s instead of q^-1; only the interpretation changes.
//
// Trailing near-zero coefficients are trimmed on construction, so degree()
// is always the index of the last nonzero coefficient and the zero
// polynomial is stored as [0].
template <typename Scalar>
class Polynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Index = Eigen::Index;

  Polynomial() : coeffs_(Coeffs::Zero(1)) {}

  Polynomial(std::initializer_list<Scalar> c) : coeffs_(static_cast<Index>(c.size())) {
    Index i = 0;
    for (const Scalar& v : c) coeffs_(i++) = v;
    normalize();
  }

  explicit Polynomial(Coeffs c) : coeffs_(std::move(c)) { normalize(); }

  explicit Polynomial(const std::vector<Scalar>& c)
      : coeffs_(Eigen::Map<const Coeffs>(c.data(), static_cast<Index>(c.size()))) {
    normalize();
  }

  static Polynomial constant(Scalar c) { return Polynomial({c}); }

  // q^-d
  static Polynomial delay(int d) {
    if (d < 0) throw std::invalid_argument("delay must be non-negative");
    Coeffs c = Coeffs::Zero(d + 1);
    c(d) = Scalar(1);
    return Polynomial(std::move(c));
  }

  const Coeffs& coeffs() const { return coeffs_; }
  Index size() const { return coeffs_.size(); }
  Index degree() const { return coeffs_.size() - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_(0) == Scalar(0); }

  // Coefficient of q^-i; zero beyond the degree.
  Scalar operator[](Index i) const {
    return (i >= 0 && i < coeffs_.size()) ? coeffs_(i) : Scalar(0);
  }

  // Value with q^-1 replaced by x (Horner).
  Scalar eval(Scalar x) const {
    Scalar acc(0);
    for (Index i = coeffs_.size() - 1; i >= 0; --i) acc = acc * x + coeffs_(i);
    return acc;
  }

  // P(1): the static gain contribution of the polynomial.
  Scalar at_one() const { return coeffs_.sum(); }

  std::vector<Scalar> to_vector() const {
    return std::vector<Scalar>(coeffs_.data(), coeffs_.data() + coeffs_.size());
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_.size() == b.coeffs_.size() && a.coeffs_ == b.coeffs_;
  }

 private:
  void normalize() {
    using std::abs;
    Index n = coeffs_.size();
    while (n > 1 && abs(coeffs_(n - 1)) <= kCoeffTolerance) --n;
    if (n == 0) {
      coeffs_ = Coeffs::Zero(1);
      return;
    }
    if (n == 1 && abs(coeffs_(0)) <= kCoeffTolerance) {
      coeffs_ = Coeffs::Zero(1);
      return;
    }
    coeffs_.conservativeResize(n);
  }

  Coeffs coeffs_;
};

using Poly = Polynomial<double>;
using ComplexPoly = Polynomial<std::complex<double>>;

template <typename Scalar>
Polynomial<Scalar> poly_add(const Polynomial<Scalar>& p, const Polynomial<Scalar>& q) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  Coeffs c = Coeffs::Zero(std::max(p.size(), q.size()));
  c.head(p.size()) += p.coeffs();
  c.head(q.size()) += q.coeffs();
  return Polynomial<Scalar>(std::move(c));
}

// Coefficient convolution.
template <typename Scalar>
Polynomial<Scalar> poly_mul(const Polynomial<Scalar>& p, const Polynomial<Scalar>& q) {
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  Coeffs c = Coeffs::Zero(p.size() + q.size() - 1);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    c.segment(i, q.size()) += p.coeffs()(i) * q.coeffs();
  }
  return Polynomial<Scalar>(std::move(c));
}

// Multiplication by q^-d.
template <typename Scalar>
Polynomial<Scalar> shift(const Polynomial<Scalar>& p, int d) {
  if (d < 0) throw std::invalid_argument("shift must be non-negative");
  if (p.is_zero()) return p;
  using Coeffs = typename Polynomial<Scalar>::Coeffs;
  Coeffs c = Coeffs::Zero(p.size() + d);
  c.tail(p.size()) = p.coeffs();
  return Polynomial<Scalar>(std::move(c));
}

template <typename Scalar>
Polynomial<Scalar> operator+(const Polynomial<Scalar>& p, const Polynomial<Scalar>& q) {
  return poly_add(p, q);
}

template <typename Scalar>
Polynomial<Scalar> operator*(const Polynomial<Scalar>& p, const Polynomial<Scalar>& q) {
  return poly_mul(p, q);
}

template <typename Scalar>
Polynomial<Scalar> operator*(Scalar k, const Polynomial<Scalar>& p) {
  return Polynomial<Scalar>(typename Polynomial<Scalar>::Coeffs(k * p.coeffs()));
}

template <typename Scalar>
Polynomial<Scalar> operator-(const Polynomial<Scalar>& p, const Polynomial<Scalar>& q) {
  return poly_add(p, Scalar(-1) * q);
}

// Largest coefficient magnitude of p - q.
template <typename Scalar>
double max_abs_diff(const Polynomial<Scalar>& p, const Polynomial<Scalar>& q) {
  using std::abs;
  const Eigen::Index n = std::max(p.size(), q.size());
  double m = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) m = std::max(m, static_cast<double>(abs(p[i] - q[i])));
  return m;
}

inline Poly real_part(const ComplexPoly& p) {
  return Poly(Poly::Coeffs(p.coeffs().real()));
}

}  // namespace hilsim
