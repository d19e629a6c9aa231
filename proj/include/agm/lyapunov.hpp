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

#ifndef AGM_LYAPUNOV_HPP
#define AGM_LYAPUNOV_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "agm/algorithms.hpp"
#include "agm/errors.hpp"
#include "agm/trajectory.hpp"

namespace agm {

// All inequality checks allow 1e-10 relative slack plus a 1e-14 absolute
// floor; Lyapunov values span many orders of magnitude along one run.
constexpr double kLyapunovRelSlack = 1e-10;
constexpr double kLyapunovAbsFloor = 1e-14;

// Discrete Lyapunov along a strongly convex run:
//   V_{k+1} = coeff_potential * (f(x_k) - f* - (eta*s/2)|grad_k|^2)
//             + (mu/2) |z_{k+1} - x*|^2,
// with coeff_potential = (zeta*nu/tau^2)(tau + zeta*eta*sqrt(q)). V[i]
// holds V_{i+1}. lemma1_residual[i] is RHS - LHS of the auxiliary-energy
// bound at step k = i+1 (defined while both neighbours are recorded).
struct LyapunovTraceSC {
  std::vector<long long> k;  // V index: k[i] = i+1
  std::vector<double> V;
  std::vector<double> ratio;             // V_{k+1}/V_k, NaN on the first row
  std::vector<double> lemma1_residual;   // NaN where not defined
  std::vector<double> lemma1_scale;      // |RHS| of the bound, for relative slack
  double target_ratio = 0.0;             // 1 - nu*sqrt(q)
  double nu_sqrt_q = 0.0;
  double coeff_potential = 0.0;
  double eta = 0.0, nu = 0.0, tau = 0.0, zeta = 0.0;
  long long potential_violations = 0;    // negative potential terms seen
};

inline LyapunovTraceSC eval_lyapunov_sc(const Trajectory& traj, const Objective& obj,
                                        const ScParams& p, double s) {
  if (!obj.minimizer || !obj.f_star)
    throw ContractViolationError("eval_lyapunov_sc needs a known minimizer and f*");
  if (traj.records.size() < 2)
    throw ContractViolationError("trajectory too short for a Lyapunov trace");
  for (const auto& r : traj.records)
    if (!r.z) throw ContractViolationError("trajectory lacks stored z_k");

  const double q = obj.mu * s;
  const double w = std::sqrt(q);
  const double eta = p.eta.eval(w);
  const double nu = p.nu.eval(w);
  const double tau = p.tau.eval(w);
  const double zeta = 1.0 + (1.0 - tau) * w;
  const double coeffV = zeta * nu / (tau * tau) * (tau + zeta * eta * w);
  const Vector& xstar = *obj.minimizer;
  const double fstar = *obj.f_star;

  LyapunovTraceSC t;
  t.nu_sqrt_q = nu * w;
  t.target_ratio = 1.0 - nu * w;
  t.coeff_potential = coeffV;
  t.eta = eta;
  t.nu = nu;
  t.tau = tau;
  t.zeta = zeta;

  const auto& rec = traj.records;
  const std::size_t n = rec.size();
  auto potential = [&](const TrajectoryRecord& r) {
    return r.f - fstar - 0.5 * eta * s * r.grad_norm_sq;
  };
  const bool potential_should_be_nonneg = 1.0 - eta * obj.L * s >= 0.0;

  t.k.resize(n - 1);
  t.V.resize(n - 1);
  t.ratio.assign(n - 1, std::numeric_limits<double>::quiet_NaN());
  t.lemma1_residual.assign(n - 1, std::numeric_limits<double>::quiet_NaN());
  t.lemma1_scale.assign(n - 1, std::numeric_limits<double>::quiet_NaN());

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double pot = potential(rec[i]);
    if (potential_should_be_nonneg && pot < -kLyapunovAbsFloor * (1.0 + std::abs(rec[i].f)))
      ++t.potential_violations;
    t.k[i] = static_cast<long long>(i) + 1;
    t.V[i] = coeffV * pot + 0.5 * obj.mu * (*rec[i + 1].z - xstar).squaredNorm();
    if (i > 0 && t.V[i - 1] != 0.0) t.ratio[i] = t.V[i] / t.V[i - 1];
  }

  // Auxiliary-energy inequality at step k = i+1 needs records i, i+1, i+2.
  const double one_minus = 1.0 - nu * w;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const auto& prev = rec[i];
    const auto& cur = rec[i + 1];
    const auto& next = rec[i + 2];
    const double lhs = (coeffV + nu * w / one_minus) * (cur.f - fstar) -
                       0.5 * nu * s * (nu / one_minus - zeta * eta / tau) * cur.grad_norm_sq +
                       (0.5 * obj.mu / one_minus) * (*next.z - xstar).squaredNorm();
    const double rhs = coeffV * (prev.f - fstar - 0.5 * eta * s * prev.grad_norm_sq) +
                       0.5 * obj.mu * (*cur.z - xstar).squaredNorm();
    t.lemma1_residual[i + 1] = rhs - lhs;
    t.lemma1_scale[i + 1] = std::abs(rhs);
  }
  return t;
}

// Standalone evaluation of the same residual at one step k >= 1.
inline double lemma1_residual(const Trajectory& traj, const Objective& obj, const ScParams& p,
                              double s, long long k) {
  const double w = std::sqrt(obj.mu * s);
  const double eta = p.eta.eval(w);
  const double nu = p.nu.eval(w);
  const double tau = p.tau.eval(w);
  const double zeta = 1.0 + (1.0 - tau) * w;
  if (k < 1) throw NotApplicableError("lemma 1 residual needs k >= 1");
  if (!(eta * s >= 0.0 && eta * s <= 1.0 / obj.L))
    throw NotApplicableError("lemma 1 needs 0 <= eta*s <= 1/L");
  if (!(1.0 - nu * w > 0.0)) throw NotApplicableError("lemma 1 needs 1 - nu*sqrt(q) > 0");
  if (zeta < 0.0) throw NotApplicableError("lemma 1 needs zeta >= 0");
  const auto trace = eval_lyapunov_sc(traj, obj, p, s);
  if (k >= static_cast<long long>(trace.lemma1_residual.size()) ||
      !std::isfinite(trace.lemma1_residual[k]))
    throw NotApplicableError("requested step not covered by the trace");
  return trace.lemma1_residual[k];
}

struct ContractionReportSC {
  bool holds = true;
  std::optional<long long> first_violation;
  double max_excess = -std::numeric_limits<double>::infinity();
};

// V_{k+1} <= (1 - nu*sqrt(q)) V_k for k >= 1, with the standard slack.
inline ContractionReportSC check_contraction_sc(const LyapunovTraceSC& trace,
                                                double nu_sqrt_q) {
  ContractionReportSC rep;
  const double target = 1.0 - nu_sqrt_q;
  for (std::size_t i = 1; i < trace.V.size(); ++i) {
    const double bound = target * trace.V[i - 1] * (1.0 + kLyapunovRelSlack) + kLyapunovAbsFloor;
    const double excess =
        (trace.V[i] - target * trace.V[i - 1]) / (1.0 + std::abs(target * trace.V[i - 1]));
    rep.max_excess = std::max(rep.max_excess, excess);
    if (trace.V[i] > bound) {
      rep.holds = false;
      if (!rep.first_violation) rep.first_violation = trace.k[i - 1];
    }
  }
  return rep;
}

struct FeasibleS {
  double s = 0.0;
  int halvings = 0;
  LyapunovTraceSC trace;
};

// Halve s from s0 until the contraction inequality holds over `horizon`
// iterations of the three-variable run on obj. Runs that diverge or violate
// the family preconditions at a large s simply trigger the next halving.
inline FeasibleS find_feasible_s_sc(const Objective& obj, const ScParams& p, double s0,
                                    int max_halvings, long long horizon = 500,
                                    std::optional<Vector> x0_opt = std::nullopt) {
  if (!obj.minimizer) throw ContractViolationError("find_feasible_s_sc needs a known minimizer");
  const Vector x0 = x0_opt ? *x0_opt : Vector(*obj.minimizer + Vector::Ones(obj.dim));
  double s = s0;
  for (int h = 0; h <= max_halvings; ++h, s *= 0.5) {
    try {
      Trajectory traj = run_extended_nag_sc(obj, s, p, x0, horizon);
      LyapunovTraceSC trace = eval_lyapunov_sc(traj, obj, p, s);
      const auto rep = check_contraction_sc(trace, trace.nu_sqrt_q);
      if (rep.holds) return {s, h, std::move(trace)};
    } catch (const DivergedError&) {
    } catch (const InvalidParameterError&) {
    }
  }
  throw InfeasibleStepError("no feasible step size after " + std::to_string(max_halvings) +
                            " halvings from s0=" + std::to_string(s0));
}

enum class OmegaChoice { kOne, kAlphaRatio, kAuto };

// Discrete Lyapunov along a general convex run:
//   V_{k+1} = omega_{k+1} (alpha_k alpha~_k s (f(x_k)-f*)
//             - (alpha~_k^2 s^2 / 2)|grad_k|^2 + |z_{k+1}-x*|^2 / 2).
// V[i] holds V_{i+1}; I/II are the contraction quantities at step k = i
// (valid from i = 1); lemma3_residual[i] is the auxiliary-energy bound
// residual at step k = i.
struct LyapunovTraceC {
  std::vector<long long> k;
  std::vector<double> V;
  std::vector<double> omega;             // omega_{k+1} per row
  std::vector<double> I;                 // NaN on row 0
  std::vector<double> II;
  std::vector<double> decrement;         // V_k - V_{k+1}, NaN on row 0
  std::vector<double> lemma3_residual;   // NaN where preconditions fail
  std::vector<double> lemma3_scale;      // |RHS| of the bound, for relative slack
  std::vector<double> grad_sq_prev;      // |grad f(x_{k-1})|^2 at step k
  OmegaChoice chosen = OmegaChoice::kOne;
};

namespace detail {

// Probes monotonicity of alpha~_k/alpha_k over [k_burn, k_burn+window].
inline std::optional<bool> ratio_non_increasing(const CSeqParams& p, long long k_burn,
                                                long long window) {
  bool non_inc = true, non_dec = true;
  double prev = p.alpha_tilde(k_burn) / p.alpha(k_burn);
  for (long long k = k_burn + 1; k <= k_burn + window; ++k) {
    const double cur = p.alpha_tilde(k) / p.alpha(k);
    const double tol = 1e-12 * std::max(1.0, std::abs(prev));
    if (cur > prev + tol) non_inc = false;
    if (cur < prev - tol) non_dec = false;
    prev = cur;
  }
  if (non_inc) return true;  // covers the flat case; Choice 1 then applies
  if (non_dec) return false;
  return std::nullopt;
}

}  // namespace detail

inline LyapunovTraceC eval_lyapunov_c(const Trajectory& traj, const Objective& obj,
                                      const CSeqParams& p, double s,
                                      OmegaChoice choice = OmegaChoice::kAuto,
                                      std::optional<Vector> x_star_ref = std::nullopt,
                                      std::optional<double> f_star_ref = std::nullopt,
                                      long long k_burn = 20) {
  const std::optional<Vector>& xs = x_star_ref ? x_star_ref : obj.minimizer;
  std::optional<double> fs = f_star_ref;
  if (!fs) fs = obj.f_star;
  if (!fs) fs = traj.f_star;
  if (!xs || !fs)
    throw ContractViolationError("eval_lyapunov_c needs (reference) x* and f*");
  if (traj.records.size() < 3)
    throw ContractViolationError("trajectory too short for a Lyapunov trace");
  for (const auto& r : traj.records)
    if (!r.z || !r.aux.count("alpha") || !r.aux.count("alpha_tilde"))
      throw ContractViolationError("trajectory lacks z/alpha/alpha_tilde (need three-var form)");

  if (choice == OmegaChoice::kAuto) {
    const auto probe = detail::ratio_non_increasing(p, k_burn, 200);
    if (!probe)
      throw NotApplicableError(
          "alpha~_k/alpha_k is not monotone over the probe window; no omega choice applies");
    choice = *probe ? OmegaChoice::kOne : OmegaChoice::kAlphaRatio;
  }

  const auto& rec = traj.records;
  const std::size_t n = rec.size();
  const Vector& xstar = *xs;
  const double fstar = *fs;
  const double L = obj.L;

  auto omega_at = [&](long long k_plus_1) {
    if (choice == OmegaChoice::kOne) return 1.0;
    // omega_{k+1} = alpha_k / alpha~_k
    return p.alpha(k_plus_1 - 1) / p.alpha_tilde(k_plus_1 - 1);
  };

  LyapunovTraceC t;
  t.chosen = choice;
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  t.k.resize(n - 1);
  t.V.resize(n - 1);
  t.omega.resize(n - 1);
  t.I.assign(n - 1, nan);
  t.II.assign(n - 1, nan);
  t.decrement.assign(n - 1, nan);
  t.lemma3_residual.assign(n - 1, nan);
  t.lemma3_scale.assign(n - 1, nan);
  t.grad_sq_prev.assign(n - 1, nan);

  auto raw_V = [&](std::size_t i) {
    // The un-weighted bracket of V_{i+1}.
    const double alpha = rec[i].aux.at("alpha");
    const double alpha_t = rec[i].aux.at("alpha_tilde");
    return alpha * alpha_t * s * (rec[i].f - fstar) -
           0.5 * alpha_t * alpha_t * s * s * rec[i].grad_norm_sq +
           0.5 * (*rec[i + 1].z - xstar).squaredNorm();
  };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.k[i] = static_cast<long long>(i) + 1;
    t.omega[i] = omega_at(static_cast<long long>(i) + 1);
    t.V[i] = t.omega[i] * raw_V(i);
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const long long k = static_cast<long long>(i);
    const double alpha_k = rec[i].aux.at("alpha");
    const double at_k = rec[i].aux.at("alpha_tilde");
    const double alpha_prev = rec[i - 1].aux.at("alpha");
    const double at_prev = rec[i - 1].aux.at("alpha_tilde");
    const double beta_prev = p.beta(k - 1);
    const double om_k = omega_at(k);
    const double om_next = omega_at(k + 1);
    t.I[i] = om_k * alpha_prev * at_prev - om_next * at_k * (alpha_k - 1.0);
    t.II[i] = om_next * at_k * (alpha_k - 1.0) * beta_prev * (2.0 - beta_prev * L * s) -
              om_k * at_prev * at_prev;
    t.decrement[i] = t.V[i - 1] - t.V[i];
    t.grad_sq_prev[i] = rec[i - 1].grad_norm_sq;

    if (alpha_k >= 1.0 && at_k >= 0.0) {
      const double rhs =
          at_k * (alpha_k - 1.0) * s *
              ((rec[i - 1].f - fstar) -
               0.5 * (2.0 - beta_prev * L * s) * beta_prev * s * rec[i - 1].grad_norm_sq) +
          0.5 * (*rec[i].z - xstar).squaredNorm();
      const double lhs = alpha_k * at_k * s * (rec[i].f - fstar) -
                         0.5 * at_k * at_k * s * s * rec[i].grad_norm_sq +
                         0.5 * (*rec[i + 1].z - xstar).squaredNorm();
      t.lemma3_residual[i] = rhs - lhs;
      t.lemma3_scale[i] = std::abs(rhs);
    }
  }
  return t;
}

struct ContractionReportC {
  bool holds = true;
  bool cubic_ok = false;
  double C_lower = 0.0;
  std::optional<long long> first_violation;
};

// Plain contraction V_{k+1} <= V_k for k >= K, and the largest decade
// constant C with V_k - V_{k+1} >= (C/2) k^2 s^2 |grad f(x_{k-1})|^2
// throughout the same range.
inline ContractionReportC check_contraction_c(const LyapunovTraceC& trace, double s,
                                              long long K) {
  if (K < 1) throw InvalidParameterError("check_contraction_c needs K >= 1");
  ContractionReportC rep;
  for (std::size_t i = 1; i < trace.V.size(); ++i) {
    if (trace.k[i - 1] < K) continue;
    const double bound = trace.V[i - 1] * (1.0 + kLyapunovRelSlack) + kLyapunovAbsFloor;
    if (trace.V[i] > bound) {
      rep.holds = false;
      if (!rep.first_violation) rep.first_violation = trace.k[i - 1];
    }
  }
  for (int j = 2; j >= -12; --j) {
    const double C = std::pow(10.0, j);
    bool ok = true;
    for (std::size_t i = 1; i < trace.V.size() && ok; ++i) {
      const long long k = trace.k[i - 1];
      if (k < K) continue;
      const double need = 0.5 * C * static_cast<double>(k) * static_cast<double>(k) * s * s *
                          trace.grad_sq_prev[i];
      if (!(trace.decrement[i] >= need * (1.0 - kLyapunovRelSlack) - kLyapunovAbsFloor))
        ok = false;
    }
    if (ok) {
      rep.C_lower = C;
      break;
    }
  }
  rep.cubic_ok = rep.C_lower > 0.0;
  return rep;
}

// First k >= 1 such that contraction holds from k through the end of the
// trace (the theorem's K is not explicit; this reports the realized one).
inline std::optional<long long> first_contraction_k_c(const LyapunovTraceC& trace) {
  const std::size_t n = trace.V.size();
  if (n < 2) return std::nullopt;
  std::size_t last_bad = 0;
  bool any_bad = false;
  for (std::size_t i = 1; i < n; ++i) {
    const double bound = trace.V[i - 1] * (1.0 + kLyapunovRelSlack) + kLyapunovAbsFloor;
    if (trace.V[i] > bound) {
      last_bad = i;
      any_bad = true;
    }
  }
  if (!any_bad) return trace.k.front();
  if (last_bad + 1 >= n) return std::nullopt;
  return trace.k[last_bad];  // k index of the first good pair after the last bad one
}

}  // namespace agm

#endif  // AGM_LYAPUNOV_HPP
