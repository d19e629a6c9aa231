// Copyright 2026 The agm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGM_SERIES_HPP
#define AGM_SERIES_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "agm/errors.hpp"

namespace agm {

// Truncated power series in w = sqrt(q). coeff(i) multiplies w^i and the
// series is cut at degree `degree()` (default 8, i.e. powers up to q^4).
// All arithmetic is closed under the truncation; products simply drop terms
// beyond the cut. Coefficients below kLeadingZeroTol are treated as zero
// when searching for the leading (first nonzero) index, since sign-based
// classification depends on it and inputs are exact user decimals.
class SqrtQSeries {
 public:
  static constexpr int kDefaultDegree = 8;
  static constexpr double kLeadingZeroTol = 1e-12;

  explicit SqrtQSeries(int degree = kDefaultDegree) : c_(degree + 1, 0.0) {
    if (degree < 0) throw InvalidParameterError("series degree must be >= 0");
  }

  SqrtQSeries(std::initializer_list<double> coeffs, int degree = kDefaultDegree)
      : SqrtQSeries(degree) {
    int i = 0;
    for (double v : coeffs) {
      if (i > degree) break;
      c_[i++] = v;
    }
  }

  static SqrtQSeries constant(double value, int degree = kDefaultDegree) {
    SqrtQSeries s(degree);
    s.c_[0] = value;
    return s;
  }

  // value * w^power
  static SqrtQSeries monomial(double value, int power, int degree = kDefaultDegree) {
    SqrtQSeries s(degree);
    if (power <= degree) s.c_[power] = value;
    return s;
  }

  static SqrtQSeries from_coeffs(const std::vector<double>& coeffs,
                                 int degree = kDefaultDegree) {
    SqrtQSeries s(degree);
    for (int i = 0; i <= degree && i < static_cast<int>(coeffs.size()); ++i) s.c_[i] = coeffs[i];
    return s;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[i] : 0.0; }
  double& coeff(int i) { return c_[i]; }
  const std::vector<double>& coeffs() const { return c_; }

  double eval(double sqrt_q) const {
    double acc = 0.0;
    for (int i = degree(); i >= 0; --i) acc = acc * sqrt_q + c_[i];
    return acc;
  }

  // First index with |coeff| > tol, or nullopt when the series is zero.
  std::optional<int> leading_index(double tol = kLeadingZeroTol) const {
    for (int i = 0; i <= degree(); ++i)
      if (std::abs(c_[i]) > tol) return i;
    return std::nullopt;
  }

  bool is_zero(double tol = kLeadingZeroTol) const { return !leading_index(tol).has_value(); }

  SqrtQSeries operator+(const SqrtQSeries& o) const {
    SqrtQSeries r(std::max(degree(), o.degree()));
    for (int i = 0; i <= r.degree(); ++i) r.c_[i] = coeff(i) + o.coeff(i);
    return r;
  }

  SqrtQSeries operator-(const SqrtQSeries& o) const {
    SqrtQSeries r(std::max(degree(), o.degree()));
    for (int i = 0; i <= r.degree(); ++i) r.c_[i] = coeff(i) - o.coeff(i);
    return r;
  }

  SqrtQSeries operator-() const {
    SqrtQSeries r = *this;
    for (double& v : r.c_) v = -v;
    return r;
  }

  SqrtQSeries operator*(const SqrtQSeries& o) const {
    SqrtQSeries r(std::max(degree(), o.degree()));
    for (int i = 0; i <= r.degree(); ++i) {
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += coeff(j) * o.coeff(i - j);
      r.c_[i] = acc;
    }
    return r;
  }

  SqrtQSeries operator*(double a) const {
    SqrtQSeries r = *this;
    for (double& v : r.c_) v *= a;
    return r;
  }

  friend SqrtQSeries operator*(double a, const SqrtQSeries& s) { return s * a; }

  SqrtQSeries operator+(double a) const {
    SqrtQSeries r = *this;
    r.c_[0] += a;
    return r;
  }

  friend SqrtQSeries operator+(double a, const SqrtQSeries& s) { return s + a; }

  SqrtQSeries operator-(double a) const { return *this + (-a); }

  friend SqrtQSeries operator-(double a, const SqrtQSeries& s) { return (-s) + a; }

  // Multiply by w^k (shift coefficients up, dropping the tail).
  SqrtQSeries shifted_up(int k) const {
    SqrtQSeries r(degree());
    for (int i = degree(); i >= k; --i) r.c_[i] = c_[i - k];
    return r;
  }

  // Divide by w^k; requires the low-order coefficients to vanish.
  SqrtQSeries shifted_down(int k, double tol = kLeadingZeroTol) const {
    for (int i = 0; i < k; ++i)
      if (std::abs(coeff(i)) > tol)
        throw InvalidParameterError("series not divisible by requested power of sqrt(q)");
    SqrtQSeries r(degree());
    for (int i = 0; i + k <= degree(); ++i) r.c_[i] = c_[i + k];
    return r;
  }

  // Multiplicative inverse; requires a nonzero constant term.
  SqrtQSeries reciprocal() const {
    if (std::abs(c_[0]) <= kLeadingZeroTol)
      throw InvalidParameterError("series reciprocal needs a nonzero constant term");
    SqrtQSeries r(degree());
    r.c_[0] = 1.0 / c_[0];
    for (int i = 1; i <= degree(); ++i) {
      double acc = 0.0;
      for (int j = 1; j <= i; ++j) acc += c_[j] * r.c_[i - j];
      r.c_[i] = -acc / c_[0];
    }
    return r;
  }

  SqrtQSeries operator/(const SqrtQSeries& o) const { return *this * o.reciprocal(); }

  // Square root; requires a positive constant term.
  SqrtQSeries sqrt() const {
    if (c_[0] <= 0.0)
      throw InvalidParameterError("series sqrt needs a positive constant term");
    SqrtQSeries r(degree());
    r.c_[0] = std::sqrt(c_[0]);
    for (int i = 1; i <= degree(); ++i) {
      double acc = 0.0;
      for (int j = 1; j < i; ++j) acc += r.c_[j] * r.c_[i - j];
      r.c_[i] = (c_[i] - acc) / (2.0 * r.c_[0]);
    }
    return r;
  }

  double max_abs_diff(const SqrtQSeries& o) const {
    double m = 0.0;
    for (int i = 0; i <= std::max(degree(), o.degree()); ++i)
      m = std::max(m, std::abs(coeff(i) - o.coeff(i)));
    return m;
  }

 private:
  std::vector<double> c_;
};

// 1 + w as a series, used all over the SC-family coefficient algebra.
inline SqrtQSeries one_plus_w(int degree = SqrtQSeries::kDefaultDegree) {
  SqrtQSeries s(degree);
  s.coeff(0) = 1.0;
  if (degree >= 1) s.coeff(1) = 1.0;
  return s;
}

}  // namespace agm

#endif  // AGM_SERIES_HPP
