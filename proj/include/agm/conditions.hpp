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

#ifndef AGM_CONDITIONS_HPP
#define AGM_CONDITIONS_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "agm/algorithms.hpp"
#include "agm/series.hpp"

namespace agm {

enum class Status { kAccelerated, kNonAccelerated, kNotCovered, kInvalid };

// The feasible step-size regime a verdict certifies: s of order 1/L gives
// the accelerated sqrt(mu/L) rate, s of order mu/L^2 only the plain mu/L
// rate.
enum class Regime { kStepInvL, kStepMuOverL2, kNA };

struct Verdict {
  Status status = Status::kNotCovered;
  std::string clause;
  Regime regime = Regime::kNA;
  std::map<std::string, double> certificate;

  bool accelerated() const { return status == Status::kAccelerated; }
};

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kAccelerated: return "Accelerated";
    case Status::kNonAccelerated: return "NonAccelerated";
    case Status::kNotCovered: return "NotCovered";
    case Status::kInvalid: return "Invalid";
  }
  return "?";
}

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::kStepInvL: return "s~1/L";
    case Regime::kStepMuOverL2: return "s~mu/L^2";
    case Regime::kNA: return "n/a";
  }
  return "?";
}

namespace detail {

constexpr double kEqTol = 1e-12;

inline bool approx_eq(double a, double b, double tol = kEqTol) { return std::abs(a - b) <= tol; }

inline Verdict accelerated(std::string clause, std::map<std::string, double> cert = {}) {
  return {Status::kAccelerated, std::move(clause), Regime::kStepInvL, std::move(cert)};
}

inline Verdict non_accelerated(std::string clause, std::map<std::string, double> cert = {}) {
  return {Status::kNonAccelerated, std::move(clause), Regime::kStepMuOverL2, std::move(cert)};
}

inline Verdict not_covered(std::string clause = "", std::map<std::string, double> cert = {}) {
  return {Status::kNotCovered, std::move(clause), Regime::kNA, std::move(cert)};
}

inline Verdict invalid(std::string clause, std::map<std::string, double> cert = {}) {
  return {Status::kInvalid, std::move(clause), Regime::kNA, std::move(cert)};
}

}  // namespace detail

// The two contraction polynomials of the strongly convex analysis:
//   I  = zeta*nu*(tau + zeta*eta*w) - tau^2
//   II = tau*(nu*tau - 2*zeta*eta) + zeta*eta*(nu*tau - zeta*eta)*w
// with zeta = 1 + (1-tau)*w, all as series in w = sqrt(q).
inline std::pair<SqrtQSeries, SqrtQSeries> series_I_II(const ScParams& p) {
  const int d = std::max({p.eta.degree(), p.nu.degree(), p.tau.degree()});
  if (d < 4)
    throw InvalidParameterError("series truncation too short for I/II (need degree >= 4)");
  const SqrtQSeries zeta = one_plus_w(d) - p.tau.shifted_up(1);
  const SqrtQSeries ze = zeta * p.eta;
  const SqrtQSeries I = zeta * p.nu * (p.tau + ze.shifted_up(1)) - p.tau * p.tau;
  const SqrtQSeries II =
      p.tau * (p.nu * p.tau - 2.0 * ze) + (ze * (p.nu * p.tau - ze)).shifted_up(1);
  return {I, II};
}

// Numeric form of the three (mutually exclusive) contraction condition sets
// at a fixed q and mu/L. Returns 1, 2, 3 for the matching set or 0.
inline int lemma2_case_at(double I, double II, double q, double mu_over_L) {
  const double w = std::sqrt(q);
  if (I > 0.0 && I + w * II <= 0.0) return 1;
  if (II > 0.0 && mu_over_L * I + w * II <= 0.0) return 2;
  if (I <= 0.0 && II <= 0.0) return 3;
  return 0;
}

// Sign-based classification of the leading Taylor coefficients of I and II.
// Case (iia) certifies contraction only for s of order mu/L^2; every other
// case certifies the accelerated regime s of order 1/L.
inline Verdict classify_lemma_s2(const SqrtQSeries& I, const SqrtQSeries& II,
                                 double tol = detail::kEqTol) {
  std::map<std::string, double> cert;
  const auto N = I.leading_index(tol);
  const auto M = II.leading_index(tol);
  if (N) {
    cert["N"] = static_cast<double>(*N);
    cert["a_N"] = I.coeff(*N);
  }
  if (M) {
    cert["M"] = static_cast<double>(*M);
    cert["b_M"] = II.coeff(*M);
  }

  const bool I_zero = !N;
  const bool II_zero = !M;

  if ((I_zero || I.coeff(*N) < 0.0) && (II_zero || II.coeff(*M) < 0.0))
    return detail::accelerated("LemS2(iii)", cert);

  if (!I_zero && I.coeff(*N) > 0.0) {
    if (!II_zero && II.coeff(*M) < 0.0) {
      if (*M <= *N - 2) return detail::accelerated("LemS2(ia)", cert);
      if (*M == *N - 1) {
        const SqrtQSeries sum = I + II.shifted_up(1);  // I + w*II
        const auto lead = sum.leading_index(tol);
        if (!lead) {
          cert["sum_leading"] = 0.0;
          return detail::accelerated("LemS2(ib)", cert);
        }
        cert["sum_leading_index"] = static_cast<double>(*lead);
        cert["sum_leading"] = sum.coeff(*lead);
        if (sum.coeff(*lead) < 0.0) return detail::accelerated("LemS2(ib)", cert);
      }
    }
    return detail::not_covered("LemS2", cert);
  }

  // a_N < 0 here; b_M > 0 or the case would have matched (iii).
  if (!II_zero && II.coeff(*M) > 0.0 && !I_zero) {
    if (*M == *N) return detail::non_accelerated("LemS2(iia)", cert);
    if (*M >= *N + 1) return detail::accelerated("LemS2(iib)", cert);
  }
  return detail::not_covered("LemS2", cert);
}

// Constant-parameter sufficient conditions (clauses (ia)-(ib) give the
// mu/L^2 regime, (iia)-(iid) the 1/L regime).
inline Verdict check_thm1(double eta0, double nu0, double tau0) {
  using detail::approx_eq;
  std::map<std::string, double> cert{{"eta0", eta0}, {"nu0", nu0}, {"tau0", tau0}};
  if (nu0 <= 0.0 || tau0 <= 0.0) return detail::not_covered("Thm1", cert);

  if (!approx_eq(nu0, tau0)) {
    const double half_prod = 0.5 * nu0 * tau0;
    if (eta0 >= half_prod - detail::kEqTol) {
      if (eta0 >= 0.0) return detail::accelerated("Thm1(iia)", cert);
      return detail::not_covered("Thm1", cert);
    }
    if (eta0 >= 0.0) return detail::non_accelerated("Thm1(ia)", cert);
    return detail::not_covered("Thm1", cert);
  }

  // nu0 = tau0
  if (tau0 > 2.0 + detail::kEqTol && approx_eq(eta0, 0.5 * tau0 * tau0))
    return detail::non_accelerated("Thm1(ib)", cert);
  if (tau0 >= 2.0 - detail::kEqTol && eta0 > 0.5 * tau0 * tau0 + detail::kEqTol)
    return detail::accelerated("Thm1(iib)", cert);
  if (tau0 > 1.0 + detail::kEqTol && tau0 < 2.0 - detail::kEqTol &&
      eta0 > tau0 + detail::kEqTol)
    return detail::accelerated("Thm1(iic)", cert);
  if (tau0 <= 1.0 + detail::kEqTol && eta0 >= tau0 - detail::kEqTol)
    return detail::accelerated("Thm1(iid)", cert);
  return detail::not_covered("Thm1", cert);
}

// Series-parameter conditions depending only on the leading constants, for
// nu0 != tau0 (the symmetrized (ia)/(iia) of the constant case).
inline Verdict check_thm2(const ScParams& p) {
  const double eta0 = p.eta.coeff(0), nu0 = p.nu.coeff(0), tau0 = p.tau.coeff(0);
  std::map<std::string, double> cert{{"eta0", eta0}, {"nu0", nu0}, {"tau0", tau0}};
  if (nu0 <= 0.0 || tau0 <= 0.0 || detail::approx_eq(nu0, tau0) || eta0 < 0.0)
    return detail::not_covered("Thm2", cert);
  if (eta0 >= 0.5 * nu0 * tau0 - detail::kEqTol) return detail::accelerated("Thm2(iia)", cert);
  return detail::non_accelerated("Thm2(ia)", cert);
}

// Series-parameter conditions for nu0 = tau0 and eta0 >= tau0^2/2, resolved
// by the linear coefficients. Higher-order subcases the analysis leaves to
// even deeper coefficients come back NotCovered.
inline Verdict check_thm3(const ScParams& p) {
  using detail::approx_eq;
  const double eta0 = p.eta.coeff(0), nu0 = p.nu.coeff(0), tau0 = p.tau.coeff(0);
  const double eta1 = p.eta.coeff(1), nu1 = p.nu.coeff(1), tau1 = p.tau.coeff(1);
  std::map<std::string, double> cert{{"eta0", eta0}, {"nu0", nu0}, {"tau0", tau0},
                                     {"eta1", eta1}, {"nu1", nu1}, {"tau1", tau1}};
  if (tau0 <= 0.0 || !approx_eq(nu0, tau0)) return detail::not_covered("Thm3", cert);
  if (eta0 < 0.5 * tau0 * tau0 - detail::kEqTol) return detail::not_covered("Thm3", cert);

  const double d1 = nu1 - tau1;
  if (approx_eq(eta0, 0.5 * tau0 * tau0)) {
    if (d1 < tau0 * (0.5 * tau0 - 1.0) - detail::kEqTol) {
      const double threshold = nu1 * tau1 + 0.5 * tau0 * tau0 * (2.5 * tau0 - 2.0);
      cert["threshold_2eta1"] = threshold;
      if (2.0 * eta1 >= threshold - detail::kEqTol)
        return detail::accelerated("Thm3(iia)", cert);
      return detail::non_accelerated("Thm3(ia)", cert);
    }
    return detail::not_covered("Thm3", cert);
  }

  // eta0 > tau0^2/2
  const double lower = (tau0 - 1.0) * tau0 - eta0;
  const double upper = eta0 - tau0;
  cert["iic_lower"] = lower;
  cert["iic_upper"] = upper;
  if (d1 < lower - detail::kEqTol) return detail::accelerated("Thm3(iib)", cert);
  if (d1 > lower + detail::kEqTol && d1 < upper - detail::kEqTol)
    return detail::accelerated("Thm3(iic)", cert);
  return detail::not_covered("Thm3", cert);
}

// Single-variable leading-constant conditions: over-damping c1^2 > 4c0 with
// the gradient-correction split on c2^2 vs c0.
inline Verdict check_cor1(double c0, double c1, double c2) {
  std::map<std::string, double> cert{{"c0", c0}, {"c1", c1}, {"c2", c2}};
  if (c0 <= 0.0 || c1 <= 0.0 || c2 <= 0.0) return detail::invalid("Cor1", cert);
  const double c2sq = c2 * c2;
  cert["c1_sq_minus_4c0"] = c1 * c1 - 4.0 * c0;
  if (c1 * c1 <= 4.0 * c0 + detail::kEqTol) return detail::not_covered("Cor1", cert);
  if (c2sq >= c0 - detail::kEqTol) return detail::accelerated("Cor1(ii)", cert);
  if (c2sq >= 0.25 * c0 - detail::kEqTol) return detail::non_accelerated("Cor1(i)", cert);
  return detail::not_covered("Cor1", cert);
}

struct Thm4Options {
  long long k_burn = 20;
  double tail_fraction = 0.10;
  double limit_osc_tol = 1e-8;
  double recursion_slack = 1e-12;
};

// Finite-horizon surrogate of the sequence conditions of the general convex
// theorem. Limits become tail-window checks over the last tail_fraction of
// k <= k_max; the window and every measured quantity land in the
// certificate so a failure is auditable.
inline Verdict check_thm4(const CSeqParams& p, long long k_max, const Thm4Options& opt = {}) {
  if (k_max < 100) throw InvalidParameterError("check_thm4 needs k_max >= 100");
  std::map<std::string, double> cert;
  const long long tail_start = k_max - static_cast<long long>(opt.tail_fraction * k_max);
  cert["tail_start"] = static_cast<double>(tail_start);
  cert["k_max"] = static_cast<double>(k_max);

  auto fail = [&cert](const char* which, double first_bad_k) {
    cert["first_bad_k"] = first_bad_k;
    auto v = detail::not_covered(std::string("Thm4:") + which, cert);
    return v;
  };

  // (i) beta_k, gamma_k converge with beta > gamma/2 > 0.
  double beta_min = 1e300, beta_max = -1e300, gamma_min = 1e300, gamma_max = -1e300;
  for (long long k = tail_start; k <= k_max; ++k) {
    const double bk = p.beta(k), gk = p.gamma(k);
    beta_min = std::min(beta_min, bk);
    beta_max = std::max(beta_max, bk);
    gamma_min = std::min(gamma_min, gk);
    gamma_max = std::max(gamma_max, gk);
  }
  const double beta = p.beta(k_max), gamma = p.gamma(k_max);
  cert["beta"] = beta;
  cert["gamma"] = gamma;
  cert["beta_osc"] = beta_max - beta_min;
  cert["gamma_osc"] = gamma_max - gamma_min;
  if (beta_max - beta_min > opt.limit_osc_tol || gamma_max - gamma_min > opt.limit_osc_tol)
    return fail("limits", static_cast<double>(tail_start));
  if (!(beta > 0.5 * gamma && gamma > 0.0)) return fail("beta>gamma/2>0", 0.0);

  // (ii) alpha positivity and the recursive condition for ALL k <= k_max.
  for (long long k = 0; k <= k_max; ++k) {
    if (p.alpha(k) <= 0.0) return fail("alpha_positive", static_cast<double>(k));
  }
  double max_recursion_violation = -1e300;
  bool recursion_equality = true;
  for (long long k = 0; k < k_max; ++k) {
    const double ak = p.alpha(k), an = p.alpha(k + 1);
    const double lhs = an * (an - 1.0), rhs = ak * ak;
    const double violation = lhs - rhs * (1.0 + opt.recursion_slack);
    max_recursion_violation = std::max(max_recursion_violation, violation);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, rhs)) recursion_equality = false;
    if (violation > 0.0) {
      cert["max_recursion_violation"] = violation;
      return fail("recursion", static_cast<double>(k));
    }
  }
  cert["max_recursion_violation"] = max_recursion_violation;
  cert["recursion_equality"] = recursion_equality ? 1.0 : 0.0;

  // alpha_k/k bounded below on the tail: anchored at mid-horizon so a
  // sequence whose alpha_k/k keeps draining fails.
  const long long k_half = std::max<long long>(1, k_max / 2);
  const double anchor = p.alpha(k_half) / static_cast<double>(k_half);
  double min_over_k = 1e300, max_ratio_dev = 0.0;
  for (long long k = tail_start; k <= k_max; ++k) {
    min_over_k = std::min(min_over_k, p.alpha(k) / static_cast<double>(k));
    if (k < k_max)
      max_ratio_dev = std::max(max_ratio_dev, std::abs(p.alpha(k + 1) / p.alpha(k) - 1.0));
  }
  cert["min_alpha_over_k"] = min_over_k;
  cert["anchor_alpha_over_k"] = anchor;
  cert["max_ratio_dev"] = max_ratio_dev;
  if (!(min_over_k > 0.9 * anchor))
    return fail("alpha_linear_growth", static_cast<double>(tail_start));
  if (!(max_ratio_dev <= 50.0 / static_cast<double>(tail_start)))
    return fail("alpha_ratio_to_one", static_cast<double>(tail_start));

  // (iii) monotonicity of alpha_tilde/alpha for k >= k_burn.
  bool non_inc = true, non_dec = true;
  double prev = p.alpha_tilde(opt.k_burn) / p.alpha(opt.k_burn);
  for (long long k = opt.k_burn + 1; k <= k_max; ++k) {
    const double cur = p.alpha_tilde(k) / p.alpha(k);
    const double tol = 1e-12 * std::max(1.0, std::abs(prev));
    if (cur > prev + tol) non_inc = false;
    if (cur < prev - tol) non_dec = false;
    if (!non_inc && !non_dec) return fail("monotone_ratio", static_cast<double>(k));
    prev = cur;
  }
  cert["ratio_non_increasing"] = non_inc ? 1.0 : 0.0;

  auto v = detail::accelerated("Thm4", cert);
  return v;
}

enum class MonotoneDirection { kNonIncreasing, kNonDecreasing, kFlat };

struct HagCMonotoneResult {
  bool found = false;
  long long k_star = 0;
  MonotoneDirection direction = MonotoneDirection::kFlat;
};

// alpha_tilde_k / alpha_k of the HAG configuration for the general convex
// setting with alpha_k = (k+r)/r, evaluated through the induced beta/gamma
// sequences. For c0 = 1 this matches the closed rational form
//   (2k^2 + (7-2c2+4r)k + 6-3c2+7r-c2r+2r^2) / ((k+r)(2k+r+3));
// a general c0 rescales both c2 -> c2/sqrt(c0) and the whole ratio by c0.
inline double hag_c_alpha_ratio(double c0, double c2, double r, long long k) {
  // sigma_{j} = (j-1) / (j-1+r+1) for alpha_k = (k+r)/r.
  auto sigma = [r](long long j) {
    return static_cast<double>(j - 1) / (static_cast<double>(j - 1) + r + 1.0);
  };
  auto b = [&](long long k2) { return 1.0 + sigma(k2 + 2); };
  auto beta = [&](long long k2) {
    return (c2 * std::sqrt(c0) - c0 / b(k2)) / sigma(k2 + 2);
  };
  // sigma_{k+1} * beta_{k-1} telescopes to c2*sqrt(c0) - c0/b_{k-1}.
  const double gamma_k = c0 * (1.0 / b(k - 1) + 1.0 / b(k)) - sigma(k + 1) * beta(k) +
                         (c2 * std::sqrt(c0) - c0 / b(k - 1));
  const double alpha_ratio = (static_cast<double>(k) + r + 1.0) / (static_cast<double>(k) + r);
  return gamma_k * alpha_ratio - beta(k) * (alpha_ratio - 1.0);
}

// Smallest k_star <= k_max such that the ratio above is monotone on
// [k_star, k_max], with its direction.
inline HagCMonotoneResult check_hag_c_monotone(double c0, double c2, double r,
                                               long long k_max) {
  if (r < 2.0) throw InvalidParameterError("check_hag_c_monotone needs r >= 2");
  if (c0 <= 0.0 || c2 <= 0.0) throw InvalidParameterError("needs c0, c2 > 0");
  if (k_max < 3) throw InvalidParameterError("k_max too small");

  std::vector<double> ratio(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (long long k = 1; k <= k_max; ++k) ratio[k] = hag_c_alpha_ratio(c0, c2, r, k);

  const double tol = 1e-14 * std::max(1.0, std::abs(ratio[k_max]));
  // Direction of the final segment.
  int dir = 0;
  for (long long k = k_max - 1; k >= 1; --k) {
    const double d = ratio[k + 1] - ratio[k];
    if (std::abs(d) > tol) {
      dir = d > 0 ? 1 : -1;
      break;
    }
  }
  HagCMonotoneResult res;
  if (dir == 0) {
    res.found = true;
    res.k_star = 1;
    res.direction = MonotoneDirection::kFlat;
    return res;
  }
  long long k_star = 1;
  for (long long k = k_max - 1; k >= 1; --k) {
    const double d = ratio[k + 1] - ratio[k];
    const bool consistent = (dir > 0) ? (d >= -tol) : (d <= tol);
    if (!consistent) {
      k_star = k + 1;
      break;
    }
  }
  res.found = true;
  res.k_star = k_star;
  res.direction = dir > 0 ? MonotoneDirection::kNonDecreasing : MonotoneDirection::kNonIncreasing;
  if (k_star >= k_max) res.found = false;  // never settles within the horizon
  return res;
}

}  // namespace agm

#endif  // AGM_CONDITIONS_HPP
