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

#ifndef AGM_ALGORITHMS_HPP
#define AGM_ALGORITHMS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "agm/errors.hpp"
#include "agm/problems.hpp"
#include "agm/sequences.hpp"
#include "agm/series.hpp"
#include "agm/trajectory.hpp"

namespace agm {

// Parameters of the three-variable strongly convex family: eta scales the
// gradient step in y, nu the z relaxation, tau the mixing of z into x. Each
// is a truncated power series in sqrt(q) evaluated at the working q.
struct ScParams {
  SqrtQSeries eta = SqrtQSeries::constant(1.0);
  SqrtQSeries nu = SqrtQSeries::constant(1.0);
  SqrtQSeries tau = SqrtQSeries::constant(1.0);

  static ScParams constants(double eta0, double nu0, double tau0) {
    return {SqrtQSeries::constant(eta0), SqrtQSeries::constant(nu0),
            SqrtQSeries::constant(tau0)};
  }
};

// Single-variable strongly convex family: coefficients c0 + R1 (gradient
// step), 1 - c1*sqrt(q) + R2 (momentum), c2*sqrt(c0) - c0/2 + R3 (gradient
// correction), with the remainder orders enforced structurally.
struct SingleVarScParams {
  double c0 = 1.0, c1 = 2.0, c2 = 1.5;
  SqrtQSeries R1 = SqrtQSeries(SqrtQSeries::kDefaultDegree);
  SqrtQSeries R2 = SqrtQSeries(SqrtQSeries::kDefaultDegree);
  SqrtQSeries R3 = SqrtQSeries(SqrtQSeries::kDefaultDegree);
  SqrtQSeries h1 = SqrtQSeries::constant(1.0);

  SingleVarScParams() = default;
  SingleVarScParams(double c0_, double c1_, double c2_,
                    SqrtQSeries r1 = SqrtQSeries(SqrtQSeries::kDefaultDegree),
                    SqrtQSeries r2 = SqrtQSeries(SqrtQSeries::kDefaultDegree),
                    SqrtQSeries r3 = SqrtQSeries(SqrtQSeries::kDefaultDegree),
                    SqrtQSeries h1_ = SqrtQSeries::constant(1.0))
      : c0(c0_), c1(c1_), c2(c2_), R1(std::move(r1)), R2(std::move(r2)), R3(std::move(r3)),
        h1(std::move(h1_)) {
    if (c0 <= 0.0 || c1 <= 0.0 || c2 <= 0.0)
      throw InvalidParameterError("single-variable SC family needs c0, c1, c2 > 0");
    // R1 = O(sqrt(q)), R2 = O(q), R3 = O(sqrt(q)).
    R1.coeff(0) = 0.0;
    R2.coeff(0) = 0.0;
    if (R2.degree() >= 1) R2.coeff(1) = 0.0;
    R3.coeff(0) = 0.0;
  }

  double gd_coeff(double w) const { return c0 + R1.eval(w); }
  double mom_coeff(double w) const { return 1.0 - c1 * w + R2.eval(w); }
  double gc_coeff(double w) const { return c2 * std::sqrt(c0) - 0.5 * c0 + R3.eval(w); }
};

// General convex family driven by the three sequences alpha, beta, gamma.
struct CSeqParams {
  Sequence alpha = Sequence::rational_alpha(2.0);
  Sequence beta = Sequence::constant(1.0);
  Sequence gamma = Sequence::constant(1.0);

  double alpha_tilde(long long k) const {
    return beta(k) * alpha(k) + (gamma(k) - beta(k)) * alpha(k + 1);
  }
};

// Hamiltonian assisted gradient method parameters. The step factor a_k and
// momentum factor b_k must stay positive; phi_k weighs the new gradient in
// the momentum update. u0 defaults to zero when absent.
struct HagParams {
  Sequence a = Sequence::constant(0.5);
  Sequence b = Sequence::constant(1.5);
  Sequence phi = Sequence::constant(1.0);
  std::optional<Vector> u0;
};

enum class CForm { kTwoVar, kSingleVar, kThreeVar };
enum class HagForm { kTwoVar, kSingleVar };

struct RunOptions {
  // Records are kept every iteration up to dense_until, then subsampled.
  long long record_stride = 1;
  long long dense_until = 10000;
  std::optional<Vector> x1_override;
  std::optional<Vector> z0_override;
  std::optional<double> f_star_override;
};

namespace detail {

class Recorder {
 public:
  Recorder(const Objective& obj, double s, std::string algo_id, long long k_max,
           const RunOptions& opts)
      : obj_(obj), k_max_(k_max), opts_(opts) {
    traj_.step_size = s;
    traj_.algo_id = std::move(algo_id);
    traj_.f_star = opts.f_star_override ? opts.f_star_override : obj.f_star;
  }

  // Returns the gradient at x so steppers evaluate it exactly once per k.
  Vector observe(long long k, const Vector& x) {
    const double f = obj_.value(x);
    Vector g = obj_.gradient(x);
    guard(k, x, f);
    if (should_record(k)) {
      TrajectoryRecord rec;
      rec.k = k;
      rec.x = x;
      rec.f = f;
      rec.grad_norm_sq = g.squaredNorm();
      traj_.records.push_back(std::move(rec));
      recorded_last_ = true;
    } else {
      recorded_last_ = false;
    }
    return g;
  }

  TrajectoryRecord* last_record() { return recorded_last_ ? &traj_.records.back() : nullptr; }

  Trajectory take() { return std::move(traj_); }

 private:
  bool should_record(long long k) const {
    if (k <= opts_.dense_until || k == k_max_) return true;
    return opts_.record_stride > 0 && k % opts_.record_stride == 0;
  }

  void guard(long long k, const Vector& x, double f) {
    if (!x.allFinite() || !std::isfinite(f)) throw DivergedError("non-finite iterate", k);
    if (k == 0) {
      f0_ = f;
      if (traj_.f_star) gap_threshold_ = 1e12 * std::max(f - *traj_.f_star, 1e-6 * (1.0 + std::abs(f)));
      else gap_threshold_ = 1e12 * std::max(1.0, std::abs(f));
      return;
    }
    const double growth = traj_.f_star ? (f - *traj_.f_star) : (f - f0_);
    if (growth > gap_threshold_) throw DivergedError("objective gap blew up", k);
  }

  const Objective& obj_;
  Trajectory traj_;
  long long k_max_;
  RunOptions opts_;
  bool recorded_last_ = false;
  double f0_ = 0.0;
  double gap_threshold_ = std::numeric_limits<double>::infinity();
};

inline void require_sc(const Objective& obj, double s) {
  if (s <= 0.0) throw InvalidParameterError("step size must be positive");
  if (obj.mu <= 0.0)
    throw InvalidParameterError("strongly convex family needs mu > 0 (q undefined at mu = 0)");
}

}  // namespace detail

// x_{k+1} = x_k - s grad f(x_k)
inline Trajectory run_gd(const Objective& obj, double s, const Vector& x0, long long k_max,
                         const RunOptions& opts = {}) {
  if (s <= 0.0) throw InvalidParameterError("step size must be positive");
  detail::Recorder rec(obj, s, "gd", k_max, opts);
  Vector x = x0;
  for (long long k = 0; k < k_max; ++k) {
    const Vector g = rec.observe(k, x);
    x -= s * g;
  }
  rec.observe(k_max, x);
  return rec.take();
}

// Generic driver for the SC-family single-variable recursions with constant
// coefficients: x_{k+1} = x_k - gd*s*grad + mom*(x_k - x_{k-1})
//                       - gc*s*(grad_k - grad_{k-1}),  x_1 = x_0 - h1*s*grad_0.
inline Trajectory run_single_var_coeffs(const Objective& obj, double s, double gd, double mom,
                                        double gc, double h1, const Vector& x0, long long k_max,
                                        const RunOptions& opts = {},
                                        const std::string& algo_id = "single-var") {
  if (s <= 0.0) throw InvalidParameterError("step size must be positive");
  detail::Recorder rec(obj, s, algo_id, k_max, opts);
  Vector x_prev = x0;
  Vector g_prev = rec.observe(0, x_prev);
  if (k_max == 0) return rec.take();
  Vector x = opts.x1_override ? *opts.x1_override : Vector(x0 - (h1 * s) * g_prev);
  for (long long k = 1; k < k_max; ++k) {
    const Vector g = rec.observe(k, x);
    Vector x_next = x - (gd * s) * g + mom * (x - x_prev) - (gc * s) * (g - g_prev);
    x_prev = x;
    g_prev = g;
    x = std::move(x_next);
  }
  rec.observe(k_max, x);
  return rec.take();
}

// NAG-SC, run in its two-variable form; the iterates coincide with the
// single-variable form started at x_1 = x_0 - 2s*grad_0/(1+sqrt(q)).
inline Trajectory run_nag_sc(const Objective& obj, double s, const Vector& x0, long long k_max,
                             const RunOptions& opts = {}) {
  detail::require_sc(obj, s);
  const double w = std::sqrt(obj.mu * s);
  const double sigma = (1.0 - w) / (1.0 + w);
  detail::Recorder rec(obj, s, "nag-sc", k_max, opts);
  Vector x = x0, y = x0;
  for (long long k = 0; k < k_max; ++k) {
    const Vector g = rec.observe(k, x);
    if (auto* r = rec.last_record()) r->y = y;
    Vector y_next = x - s * g;
    x = y_next + sigma * (y_next - y);
    y = std::move(y_next);
  }
  rec.observe(k_max, x);
  if (auto* r = rec.last_record()) r->y = y;
  return rec.take();
}

// Heavy ball: no gradient correction. Initialized like NAG-SC in the
// figure-suite convention unless x1 is overridden.
inline Trajectory run_heavy_ball(const Objective& obj, double s, const Vector& x0,
                                 long long k_max, const RunOptions& opts = {}) {
  detail::require_sc(obj, s);
  const double w = std::sqrt(obj.mu * s);
  const double sigma = (1.0 - w) / (1.0 + w);
  detail::Recorder rec(obj, s, "heavy-ball", k_max, opts);
  Vector x_prev = x0;
  Vector g_prev = rec.observe(0, x_prev);
  if (k_max == 0) return rec.take();
  Vector x = opts.x1_override ? *opts.x1_override : Vector(x0 - (2.0 * s / (1.0 + w)) * g_prev);
  for (long long k = 1; k < k_max; ++k) {
    const Vector g = rec.observe(k, x);
    Vector x_next = x - s * g + sigma * (x - x_prev);
    x_prev = x;
    x = std::move(x_next);
  }
  rec.observe(k_max, x);
  return rec.take();
}

// The three-variable strongly convex family. Starts from x_0 = z_0 unless
// z_0 is overridden; stores y_k and z_k alongside every record.
inline Trajectory run_extended_nag_sc(const Objective& obj, double s, const ScParams& p,
                                      const Vector& x0, long long k_max,
                                      const RunOptions& opts = {},
                                      const std::string& algo_id = "extended-nag-sc") {
  detail::require_sc(obj, s);
  const double w = std::sqrt(obj.mu * s);
  const double eta = p.eta.eval(w);
  const double nu = p.nu.eval(w);
  const double tau = p.tau.eval(w);
  if (tau <= 0.0) throw InvalidParameterError("tau(sqrt(q)) must be positive");
  if (1.0 - nu * w <= 0.0)
    throw InvalidParameterError("1 - nu*sqrt(q) must be positive at the working q");
  const double mix = tau * w / (1.0 + w);

  detail::Recorder rec(obj, s, algo_id, k_max, opts);
  Vector x = x0;
  Vector y = x0;
  Vector z = opts.z0_override ? *opts.z0_override : x0;
  for (long long k = 0; k < k_max; ++k) {
    const Vector g = rec.observe(k, x);
    if (auto* r = rec.last_record()) {
      r->y = y;
      r->z = z;
    }
    y = x - (eta * s) * g;
    z = (nu * w) * (x - g / obj.mu) + (1.0 - nu * w) * z;
    x = mix * z + (1.0 - mix) * y;
  }
  rec.observe(k_max, x);
  if (auto* r = rec.last_record()) {
    r->y = y;
    r->z = z;
  }
  return rec.take();
}

// TMM is the (1,1,2) member of the family.
inline Trajectory run_tmm(const Objective& obj, double s, const Vector& x0, long long k_max,
                          const RunOptions& opts = {}) {
  return run_extended_nag_sc(obj, s, ScParams::constants(1.0, 1.0, 2.0), x0, k_max, opts, "tmm");
}

inline Trajectory run_single_var_sc(const Objective& obj, double s, const SingleVarScParams& p,
                                    const Vector& x0, long long k_max,
                                    const RunOptions& opts = {}) {
  detail::require_sc(obj, s);
  const double w = std::sqrt(obj.mu * s);
  return run_single_var_coeffs(obj, s, p.gd_coeff(w), p.mom_coeff(w), p.gc_coeff(w),
                               p.h1.eval(w), x0, k_max, opts, "single-var-sc");
}

// The general convex family in any of its three equivalent forms. All forms
// produce identical x iterates; the three-variable form additionally stores
// z_k, which the Lyapunov monitors need.
inline Trajectory run_extended_nag_c(const Objective& obj, double s, const CSeqParams& p,
                                     const Vector& x0, long long k_max, CForm form,
                                     const RunOptions& opts = {}) {
  if (s <= 0.0) throw InvalidParameterError("step size must be positive");
  auto check_alpha = [&](long long k) {
    const double a = p.alpha(k);
    if (a <= 0.0)
      throw InvalidParameterError("alpha_k must stay positive (k=" + std::to_string(k) + ")");
    return a;
  };
  const char* id = form == CForm::kTwoVar    ? "extended-nag-c/two-var"
                   : form == CForm::kSingleVar ? "extended-nag-c/single-var"
                                               : "extended-nag-c/three-var";
  detail::Recorder rec(obj, s, id, k_max, opts);

  auto annotate = [&](long long k) -> TrajectoryRecord* {
    auto* r = rec.last_record();
    if (r) {
      r->aux["alpha"] = p.alpha(k);
      r->aux["alpha_tilde"] = p.alpha_tilde(k);
    }
    return r;
  };

  if (form == CForm::kTwoVar) {
    Vector x = x0, y = x0;
    for (long long k = 0; k < k_max; ++k) {
      check_alpha(k);
      check_alpha(k + 1);
      const Vector g = rec.observe(k, x);
      if (auto* r = annotate(k)) r->y = y;
      const double sigma = sigma_from_alpha(p.alpha, k + 1);
      Vector y_next = x - (p.beta(k) * s) * g;
      x = x - (p.gamma(k) * s) * g + sigma * (y_next - y);
      y = std::move(y_next);
    }
    rec.observe(k_max, x);
    if (auto* r = annotate(k_max)) r->y = y;
    return rec.take();
  }

  if (form == CForm::kSingleVar) {
    Vector x_prev = x0;
    Vector g_prev = rec.observe(0, x_prev);
    annotate(0);
    if (k_max == 0) return rec.take();
    check_alpha(0);
    check_alpha(1);
    const double h1 = p.gamma(0) + (p.alpha(0) - 1.0) * p.beta(0) / p.alpha(1);
    Vector x = opts.x1_override ? *opts.x1_override : Vector(x0 - (h1 * s) * g_prev);
    for (long long k = 1; k < k_max; ++k) {
      check_alpha(k + 1);
      const Vector g = rec.observe(k, x);
      annotate(k);
      const double sigma = sigma_from_alpha(p.alpha, k + 1);
      const double gd = p.gamma(k) + sigma * (p.beta(k) - p.beta(k - 1));
      Vector x_next =
          x - (gd * s) * g + sigma * (x - x_prev) - (sigma * p.beta(k - 1) * s) * (g - g_prev);
      x_prev = x;
      g_prev = g;
      x = std::move(x_next);
    }
    rec.observe(k_max, x);
    annotate(k_max);
    return rec.take();
  }

  // Three-variable form.
  Vector x = x0, y = x0;
  Vector z = opts.z0_override ? *opts.z0_override : x0;
  for (long long k = 0; k < k_max; ++k) {
    check_alpha(k);
    const double alpha_next = check_alpha(k + 1);
    const Vector g = rec.observe(k, x);
    if (auto* r = annotate(k)) {
      r->y = y;
      r->z = z;
    }
    y = x - (p.beta(k) * s) * g;
    z = z - (p.alpha_tilde(k) * s) * g;
    x = z / alpha_next + (1.0 - 1.0 / alpha_next) * y;
  }
  rec.observe(k_max, x);
  if (auto* r = annotate(k_max)) {
    r->y = y;
    r->z = z;
  }
  return rec.take();
}

// HAG. The gradient weights of the momentum update (old, new) =
// (sqrt(a_k b_k) - phi_k, phi_k) are stored in aux per record.
inline Trajectory run_hag(const Objective& obj, double s_hint, const HagParams& p,
                          const Vector& x0, long long k_max, HagForm form,
                          const RunOptions& opts = {}) {
  auto ab = [&](long long k) {
    const double a = p.a(k), b = p.b(k);
    if (a <= 0.0 || b <= 0.0)
      throw InvalidParameterError("HAG needs a_k, b_k > 0 (k=" + std::to_string(k) + ")");
    return std::make_pair(a, b);
  };
  const char* id = form == HagForm::kTwoVar ? "hag/two-var" : "hag/single-var";
  detail::Recorder rec(obj, s_hint, id, k_max, opts);
  auto annotate = [&](long long k) -> TrajectoryRecord* {
    auto* r = rec.last_record();
    if (r) {
      const auto [a, b] = ab(k);
      r->aux["w_old"] = std::sqrt(a * b) - p.phi(k);
      r->aux["w_new"] = p.phi(k);
    }
    return r;
  };

  if (form == HagForm::kTwoVar) {
    Vector x = x0;
    Vector u = p.u0 ? *p.u0 : Vector(Vector::Zero(obj.dim));
    Vector g = rec.observe(0, x);
    if (auto* r = annotate(0)) r->u = u;
    for (long long k = 0; k < k_max; ++k) {
      const auto [a, b] = ab(k);
      const double sab = std::sqrt(a * b);
      Vector x_next = x - a * g + sab * u;
      Vector g_next = rec.observe(k + 1, x_next);
      u = -u - sab * g + b * u - p.phi(k) * (g_next - g);
      x = std::move(x_next);
      g = std::move(g_next);
      if (auto* r = annotate(k + 1)) r->u = u;
    }
    return rec.take();
  }

  // Single-variable form.
  Vector x_prev = x0;
  Vector g_prev = rec.observe(0, x_prev);
  annotate(0);
  if (k_max == 0) return rec.take();
  const auto [a0, b0] = ab(0);
  Vector u0 = p.u0 ? *p.u0 : Vector(Vector::Zero(obj.dim));
  Vector x = opts.x1_override ? *opts.x1_override
                              : Vector(x0 - a0 * g_prev + std::sqrt(a0 * b0) * u0);
  for (long long k = 1; k < k_max; ++k) {
    const auto [a_prev, b_prev] = ab(k - 1);
    const auto [a, b] = ab(k);
    const Vector g = rec.observe(k, x);
    annotate(k);
    const double carry = std::sqrt((a * b) / (a_prev * b_prev));
    const double gd = a_prev * carry + a;
    const double mom = (b_prev - 1.0) * carry;
    const double gc = p.phi(k - 1) * std::sqrt(a * b) - a_prev * carry;
    Vector x_next = x - gd * g + mom * (x - x_prev) - gc * (g - g_prev);
    x_prev = x;
    g_prev = g;
    x = std::move(x_next);
  }
  rec.observe(k_max, x);
  annotate(k_max);
  return rec.take();
}

// Constant HAG configuration recovering the strongly convex single-variable
// family: a = (c0/2)s, b = 2 - c1*sqrt(q), phi = c2*sqrt(s), u0 = 0.
inline HagParams hag_sc_config(double c0, double c1, double c2, double s, double mu) {
  if (c0 <= 0.0 || c1 <= 0.0 || c2 <= 0.0)
    throw InvalidParameterError("hag_sc_config needs c0, c1, c2 > 0");
  if (s <= 0.0 || mu <= 0.0) throw InvalidParameterError("hag_sc_config needs s, mu > 0");
  const double b = 2.0 - c1 * std::sqrt(mu * s);
  if (b <= 0.0) throw InvalidParameterError("hag_sc_config: b = 2 - c1*sqrt(q) must be positive");
  HagParams p;
  p.a = Sequence::constant(0.5 * c0 * s);
  p.b = Sequence::constant(b);
  p.phi = Sequence::constant(c2 * std::sqrt(s));
  return p;
}

// Time-varying HAG configuration for the general convex setting:
// b_k = 1 + sigma_{k+2}, a_k = (c0/b_k)s (so a_k b_k = c0*s), phi_k = c2*sqrt(s).
inline HagParams hag_c_config(double c0, double c2, double s, const Sequence& alpha) {
  if (c0 <= 0.0 || c2 <= 0.0) throw InvalidParameterError("hag_c_config needs c0, c2 > 0");
  if (s <= 0.0) throw InvalidParameterError("hag_c_config needs s > 0");
  HagParams p;
  p.b = Sequence::from_function("hag-c-b", [alpha](long long k) {
    const double b = 1.0 + sigma_from_alpha(alpha, k + 2);
    if (b <= 0.0)
      throw InvalidParameterError("hag_c_config: sigma_{k+2} <= -1 at k=" + std::to_string(k));
    return b;
  });
  const Sequence b_copy = p.b;
  p.a = Sequence::from_function("hag-c-a",
                                [b_copy, c0, s](long long k) { return c0 * s / b_copy(k); });
  p.phi = Sequence::constant(c2 * std::sqrt(s));
  return p;
}

// The alternating sequence from the no-limiting-ODE counterexample:
// alpha_k = (k+r)/r for even k, the FISTA recursion for odd k.
inline Sequence lemma5_alpha(double r) {
  if (r < 2.0) throw InvalidParameterError("alternating alpha sequence needs r >= 2");
  return Sequence::alternating_alpha(r);
}

}  // namespace agm

#endif  // AGM_ALGORITHMS_HPP
