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

#ifndef AGM_TRANSFORMS_HPP
#define AGM_TRANSFORMS_HPP

#include <cmath>
#include <utility>

#include "agm/algorithms.hpp"
#include "agm/errors.hpp"
#include "agm/series.hpp"

namespace agm {

// Coefficients of the single-variable recursion
//   x_{k+1} = x_k - gd*s*grad_k + mom*(x_k - x_{k-1}) - gc*s*(grad_k - grad_{k-1})
// with x_1 = x_0 - h1*s*grad_0. For HAG conversions the step factor is
// folded into the coefficients and they multiply the bare gradient.
struct SingleVarScCoeffs {
  double gd_coeff = 0.0;
  double mom_coeff = 0.0;
  double gc_coeff = 0.0;
  double h1 = 0.0;
};

// The four coefficient series of the single-variable form induced by the
// three-variable family:
//   gd  = nu(tau + zeta*eta*w) / (1+w)
//   mom = zeta(1 - nu*w) / (1+w)
//   gc  = zeta*eta(1 - nu*w) / (1+w)
//   h1  = (zeta*eta + nu*tau) / (1+w)
// where w = sqrt(q) and zeta = 1 + (1-tau)w.
struct ScCoeffSeries {
  SqrtQSeries gd, mom, gc, h1;
};

inline ScCoeffSeries sc_coeff_series(const ScParams& p) {
  const int d = std::max({p.eta.degree(), p.nu.degree(), p.tau.degree()});
  const SqrtQSeries w1 = one_plus_w(d);
  const SqrtQSeries inv_w1 = w1.reciprocal();
  const SqrtQSeries zeta = w1 - p.tau.shifted_up(1);
  const SqrtQSeries one_minus_nu_w = 1.0 - p.nu.shifted_up(1);
  ScCoeffSeries out{
      p.nu * (p.tau + (zeta * p.eta).shifted_up(1)) * inv_w1,
      zeta * one_minus_nu_w * inv_w1,
      zeta * p.eta * one_minus_nu_w * inv_w1,
      (zeta * p.eta + p.nu * p.tau) * inv_w1,
  };
  return out;
}

// Exact pointwise evaluation of the same coefficients at q > 0. This is the
// conversion fed to runners; it has no truncation error.
inline SingleVarScCoeffs sc_three_to_single(const ScParams& p, double q) {
  if (q <= 0.0) throw InvalidParameterError("sc_three_to_single needs q > 0");
  const double w = std::sqrt(q);
  const double eta = p.eta.eval(w);
  const double nu = p.nu.eval(w);
  const double tau = p.tau.eval(w);
  if (tau <= 0.0) throw InvalidParameterError("tau(sqrt(q)) must be positive");
  const double zeta = 1.0 + (1.0 - tau) * w;
  SingleVarScCoeffs c;
  c.gd_coeff = nu * (tau + zeta * eta * w) / (1.0 + w);
  c.mom_coeff = zeta * (1.0 - nu * w) / (1.0 + w);
  c.gc_coeff = zeta * eta * (1.0 - nu * w) / (1.0 + w);
  c.h1 = (zeta * eta + nu * tau) / (1.0 + w);
  return c;
}

// Result of lifting a single-variable form back to the three-variable one.
// The lifted recursion starts from z_0 = x_0 + h2 * (sqrt(q)/mu) * grad_0.
struct ScConversion {
  ScParams params;
  SqrtQSeries h2;
};

// Lift the single-variable form with gradient coefficient c0 + R1, momentum
// 1 - c1*w + R2 and gradient correction gc0 + R3 into three-variable
// parameters, as truncated series of degree `degree`. Requires c1^2 > 4*c0;
// at c1^2 = 4*c0 the quadratic for tau degenerates and the form stays
// single-variable only. The root is fixed to tau0 = (c1 + sqrt(c1^2-4c0))/2,
// so tau0 >= nu0.
inline ScConversion single_to_sc_three(double c0, double c1, double gc0,
                                       const SqrtQSeries& R1, const SqrtQSeries& R2,
                                       const SqrtQSeries& R3, const SqrtQSeries& h1,
                                       int degree = SqrtQSeries::kDefaultDegree) {
  if (c0 <= 0.0) throw InvalidParameterError("single_to_sc_three needs c0 > 0");
  if (gc0 < 0.0)
    throw InvalidParameterError("gradient-correction constant implies eta0 < 0");
  if (c1 * c1 <= 4.0 * c0 + 1e-12)
    throw NotRepresentableError(
        "c1^2 <= 4*c0: single-variable form has no three-variable representation");

  auto lift = [degree](const SqrtQSeries& s) { return SqrtQSeries::from_coeffs(s.coeffs(), degree); };
  const SqrtQSeries w1 = one_plus_w(degree);
  const SqrtQSeries g1 = (c0 + lift(R1)) * w1;
  const SqrtQSeries g2 = (1.0 - SqrtQSeries::monomial(c1, 1, degree) + lift(R2)) * w1;
  const SqrtQSeries g3 = (gc0 + lift(R3)) * w1;

  const SqrtQSeries eta = g3 / g2;

  // Quadratic a2*tau^2 + a1*tau + a0 = 0 with every coefficient divisible by
  // w; the reduced coefficients below are the originals over w.
  const SqrtQSeries a2r = eta.shifted_up(2) - 1.0;  // -(1 - eta*q)
  const SqrtQSeries a1r = (1.0 - g2 + SqrtQSeries::monomial(1.0, 1, degree)).shifted_down(1) +
                          (g1 - 2.0 * eta + eta * g2).shifted_up(1) - 2.0 * eta.shifted_up(2);
  const SqrtQSeries a0r = (eta - g1 - eta * g2) + (2.0 * eta - g1 - eta * g2).shifted_up(1) +
                          eta.shifted_up(2);

  SqrtQSeries disc = a1r * a1r - 4.0 * (a2r * a0r);
  if (disc.coeff(0) <= 0.0)
    throw NotRepresentableError("discriminant (c1^2 - 4*c0) not positive");
  const SqrtQSeries tau = (-a1r - disc.sqrt()) / (2.0 * a2r);

  const SqrtQSeries zeta = w1 - tau.shifted_up(1);
  const SqrtQSeries nu = g1 / (tau + (zeta * eta).shifted_up(1));

  ScConversion out;
  out.params = ScParams{eta, nu, tau};
  out.h2 = (zeta * eta + nu * tau - w1 * lift(h1)) / (tau * (1.0 - nu.shifted_up(1)));
  return out;
}

// z_0 matching a given x_1 = x_0 - h1*s*grad_0 for the lifted recursion.
inline Vector conversion_z0(const ScConversion& conv, const Objective& obj, double s,
                            const Vector& x0) {
  const double q = obj.mu * s;
  const double w = std::sqrt(q);
  return x0 + (conv.h2.eval(w) * w / obj.mu) * obj.gradient(x0);
}

// Time-varying single-variable coefficients of HAG at index k >= 1. These
// multiply the bare gradient (the step factor lives inside a_k).
inline SingleVarScCoeffs hag_to_single(const HagParams& p, long long k) {
  if (k < 1) throw InvalidParameterError("hag_to_single needs k >= 1");
  const double a_prev = p.a(k - 1), b_prev = p.b(k - 1);
  const double a = p.a(k), b = p.b(k);
  if (a_prev <= 0.0 || b_prev <= 0.0 || a <= 0.0 || b <= 0.0)
    throw InvalidParameterError("hag_to_single needs a, b > 0 at k-1 and k");
  const double carry = std::sqrt((a * b) / (a_prev * b_prev));
  SingleVarScCoeffs c;
  c.gd_coeff = a_prev * carry + a;
  c.mom_coeff = (b_prev - 1.0) * carry;
  c.gc_coeff = p.phi(k - 1) * std::sqrt(a * b) - a_prev * carry;
  c.h1 = p.a(0);
  return c;
}

// (delta_k, rho_k) = (sqrt(a_k/b_k), a_k + b_k - 1) of the HAG derivation.
inline std::pair<double, double> hag_delta_rho(const HagParams& p, long long k) {
  const double a = p.a(k), b = p.b(k);
  if (a <= 0.0 || b <= 0.0) throw InvalidParameterError("hag_delta_rho needs a_k, b_k > 0");
  return {std::sqrt(a / b), a + b - 1.0};
}

}  // namespace agm

#endif  // AGM_TRANSFORMS_HPP
