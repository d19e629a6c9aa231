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

#ifndef AGM_ODE_HPP
#define AGM_ODE_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "agm/errors.hpp"
#include "agm/problems.hpp"

namespace agm {

enum class OdeKind {
  kGradientFlow,
  kLowResSc,
  kLowResC,
  kHighResNagSc,
  kHighResHb,
  kHighResC,
};

inline const char* to_string(OdeKind k) {
  switch (k) {
    case OdeKind::kGradientFlow: return "gradient-flow";
    case OdeKind::kLowResSc: return "low-res-sc";
    case OdeKind::kLowResC: return "low-res-c";
    case OdeKind::kHighResNagSc: return "high-res-nag-sc";
    case OdeKind::kHighResHb: return "high-res-hb";
    case OdeKind::kHighResC: return "high-res-c";
  }
  return "?";
}

inline std::optional<OdeKind> ode_kind_from_string(const std::string& s) {
  if (s == "gradient-flow") return OdeKind::kGradientFlow;
  if (s == "low-res-sc") return OdeKind::kLowResSc;
  if (s == "low-res-c") return OdeKind::kLowResC;
  if (s == "high-res-nag-sc") return OdeKind::kHighResNagSc;
  if (s == "high-res-hb") return OdeKind::kHighResHb;
  if (s == "high-res-c") return OdeKind::kHighResC;
  return std::nullopt;
}

// One of the six limiting ODEs in first-order form, with each kind's
// canonical initial conditions applied at construction. The C-family
// flows are singular at t = 0; low-res-c starts at a configurable t_eps
// (approximating the t = 0 condition) and high-res-c starts at its exact
// t0 = (r+1) sqrt(s) / 2.
struct OdeSystem {
  OdeKind kind = OdeKind::kGradientFlow;
  Objective obj;
  double c0 = 1.0, c1 = 2.0;          // low-res-sc
  double r = 2.0;                     // C-family friction parameter
  double beta_over_gamma = 1.0;       // C-family gradient-correction weight
  double s = 0.0;                     // retained O(sqrt(s)) scale (high-res)
  double t0 = 0.0;
  Vector x0;
  Vector v0;  // initial velocity (unused by gradient flow)

  bool second_order() const { return kind != OdeKind::kGradientFlow; }
};

inline OdeSystem make_ode_system(OdeKind kind, const Objective& obj, const Vector& x0,
                                 double c0 = 1.0, double c1 = 2.0, double r = 2.0,
                                 double beta_over_gamma = 1.0, double s = 0.0,
                                 std::optional<double> t_eps = std::nullopt) {
  OdeSystem sys;
  sys.kind = kind;
  sys.obj = obj;
  sys.c0 = c0;
  sys.c1 = c1;
  sys.r = r;
  sys.beta_over_gamma = beta_over_gamma;
  sys.s = s;
  sys.x0 = x0;
  sys.v0 = Vector::Zero(obj.dim);
  switch (kind) {
    case OdeKind::kGradientFlow:
    case OdeKind::kLowResSc:
      sys.t0 = 0.0;
      break;
    case OdeKind::kLowResC:
      sys.t0 = t_eps ? *t_eps : (s > 0.0 ? std::sqrt(s) : 1e-3);
      if (sys.t0 <= 0.0) throw InvalidParameterError("low-res-c needs t_eps > 0");
      break;
    case OdeKind::kHighResNagSc:
    case OdeKind::kHighResHb: {
      if (s <= 0.0) throw InvalidParameterError("high-resolution ODEs need s > 0");
      sys.t0 = 0.0;
      const double w = std::sqrt(obj.mu * s);
      sys.v0 = -(2.0 * std::sqrt(s) / (1.0 + w)) * obj.gradient(x0);
      break;
    }
    case OdeKind::kHighResC: {
      if (s <= 0.0) throw InvalidParameterError("high-resolution ODEs need s > 0");
      sys.t0 = 0.5 * (r + 1.0) * std::sqrt(s);
      sys.v0 = -std::sqrt(s) * obj.gradient(x0);
      break;
    }
  }
  return sys;
}

inline Vector ode_acceleration(const OdeSystem& sys, double t, const Vector& x,
                               const Vector& v) {
  const double sqmu = std::sqrt(sys.obj.mu);
  switch (sys.kind) {
    case OdeKind::kGradientFlow:
      throw ContractViolationError("gradient flow has no acceleration term");
    case OdeKind::kLowResSc:
      return Vector(-sys.c1 * sqmu * v - sys.c0 * sys.obj.gradient(x));
    case OdeKind::kLowResC:
      return Vector(-((sys.r + 1.0) / t) * v - sys.obj.gradient(x));
    case OdeKind::kHighResNagSc: {
      const double w = std::sqrt(sys.obj.mu * sys.s);
      return Vector(-2.0 * sqmu * v - std::sqrt(sys.s) * sys.obj.hvp(x, v) -
                    (1.0 + w) * sys.obj.gradient(x));
    }
    case OdeKind::kHighResHb: {
      const double w = std::sqrt(sys.obj.mu * sys.s);
      return Vector(-2.0 * sqmu * v - (1.0 + w) * sys.obj.gradient(x));
    }
    case OdeKind::kHighResC: {
      const double rs = std::sqrt(sys.s);
      return Vector(-((sys.r + 1.0) / t) * v - sys.beta_over_gamma * rs * sys.obj.hvp(x, v) -
                    (1.0 + 0.5 * (sys.r + 1.0) * rs / t) * sys.obj.gradient(x));
    }
  }
  throw ContractViolationError("unreachable");
}

// Continuous Lyapunov value for the system at state (x, v) and time t.
// Needs the objective's minimizer and f*.
inline double continuous_lyapunov(const OdeSystem& sys, const Vector& x, const Vector& v,
                                  double t) {
  if (!sys.obj.minimizer || !sys.obj.f_star)
    throw ContractViolationError("continuous_lyapunov needs a known minimizer and f*");
  const Vector& xstar = *sys.obj.minimizer;
  const double gap = sys.obj.value(x) - *sys.obj.f_star;
  const double sqmu = std::sqrt(sys.obj.mu);
  switch (sys.kind) {
    case OdeKind::kGradientFlow:
      return gap;
    case OdeKind::kLowResSc: {
      const double disc = sys.c1 * sys.c1 - 4.0 * sys.c0;
      const double lambda = disc <= 0.0 ? 0.5 * sys.c1 : 0.5 * (sys.c1 + std::sqrt(disc));
      return sys.c0 * gap + 0.5 * (v + lambda * sqmu * (x - xstar)).squaredNorm();
    }
    case OdeKind::kLowResC:
      // sqrt(s) -> 0 limit of the high-resolution C Lyapunov.
      return t * t * gap + 0.5 * (sys.r * (x - xstar) + t * v).squaredNorm();
    case OdeKind::kHighResNagSc: {
      const double w = std::sqrt(sys.obj.mu * sys.s);
      return (1.0 + w) * gap +
             0.5 * (v + sqmu * (x - xstar) + std::sqrt(sys.s) * sys.obj.gradient(x))
                       .squaredNorm();
    }
    case OdeKind::kHighResHb: {
      const double w = std::sqrt(sys.obj.mu * sys.s);
      return (1.0 + w) * gap + 0.5 * (v + sqmu * (x - xstar)).squaredNorm();
    }
    case OdeKind::kHighResC: {
      const double rs = std::sqrt(sys.s);
      const double C = sys.r > 2.0 ? 0.0 : sys.beta_over_gamma;
      const double shift = 0.5 * (sys.r + 1.0) - sys.beta_over_gamma;
      const Vector aux =
          sys.r * (x - xstar) + t * (v + sys.beta_over_gamma * rs * sys.obj.gradient(x));
      return (t + C * rs) * (t + shift * rs) * gap +
             (t + C * rs) / t * 0.5 * aux.squaredNorm();
    }
  }
  throw ContractViolationError("unreachable");
}

// Exponential decay rate certified for the kind (0 for the 1/t^2 kinds).
inline double nominal_rate(const OdeSystem& sys) {
  const double sqmu = std::sqrt(sys.obj.mu);
  switch (sys.kind) {
    case OdeKind::kGradientFlow:
      return 2.0 * sys.obj.mu;
    case OdeKind::kLowResSc: {
      const double disc = std::max(sys.c1 * sys.c1 - 4.0 * sys.c0, 0.0);
      return 0.5 * (sys.c1 - std::sqrt(disc)) * sqmu;
    }
    case OdeKind::kHighResNagSc:
    case OdeKind::kHighResHb:
      return sqmu;
    default:
      return 0.0;
  }
}

struct OdeSample {
  double t = 0.0;
  Vector x;
  Vector xdot;
  double f_gap = 0.0;
  double grad_sq = 0.0;
  double lyapunov_V = 0.0;
  double rate_check = 0.0;
};

struct OdeTrace {
  std::vector<OdeSample> samples;
  double dt = 0.0;
  OdeKind kind = OdeKind::kGradientFlow;
  double V0 = 0.0;
};

// Classical fixed-step RK4 on the first-order reformulation (X; V).
inline OdeTrace integrate(const OdeSystem& sys, double dt, double t_max,
                          long long sample_stride = 1) {
  if (dt <= 0.0) throw InvalidParameterError("dt must be positive");
  if (sample_stride < 1) throw InvalidParameterError("sample stride must be >= 1");
  const bool has_ref = sys.obj.minimizer && sys.obj.f_star;
  OdeTrace trace;
  trace.dt = dt;
  trace.kind = sys.kind;

  Vector x = sys.x0;
  Vector v = sys.v0;
  double t = sys.t0;
  const double rate = nominal_rate(sys);
  const long long n_steps = static_cast<long long>(std::ceil((t_max - sys.t0) / dt - 1e-12));

  auto sample = [&](long long step) {
    if (step % sample_stride != 0 && step != n_steps) return;
    OdeSample smp;
    smp.t = t;
    smp.x = x;
    smp.xdot = sys.second_order() ? v : Vector(-sys.obj.gradient(x));
    smp.f_gap = has_ref ? sys.obj.value(x) - *sys.obj.f_star
                        : std::numeric_limits<double>::quiet_NaN();
    smp.grad_sq = sys.obj.gradient(x).squaredNorm();
    smp.lyapunov_V = has_ref ? continuous_lyapunov(sys, x, smp.xdot, t)
                             : std::numeric_limits<double>::quiet_NaN();
    if (rate > 0.0) {
      smp.rate_check = smp.lyapunov_V > 0.0
                           ? std::exp(rate * (t - sys.t0) + std::log(smp.lyapunov_V))
                           : 0.0;
    } else {
      smp.rate_check = t * t * smp.f_gap;
    }
    if (!x.allFinite()) throw DivergedError("non-finite ODE state", step);
    trace.samples.push_back(std::move(smp));
  };

  sample(0);
  if (sys.second_order()) {
    for (long long step = 1; step <= n_steps; ++step) {
      const Vector a1 = ode_acceleration(sys, t, x, v);
      const Vector k1x = v, k1v = a1;
      const Vector a2 = ode_acceleration(sys, t + 0.5 * dt, x + 0.5 * dt * k1x,
                                         v + 0.5 * dt * k1v);
      const Vector k2x = v + 0.5 * dt * k1v, k2v = a2;
      const Vector a3 = ode_acceleration(sys, t + 0.5 * dt, x + 0.5 * dt * k2x,
                                         v + 0.5 * dt * k2v);
      const Vector k3x = v + 0.5 * dt * k2v, k3v = a3;
      const Vector a4 = ode_acceleration(sys, t + dt, x + dt * k3x, v + dt * k3v);
      const Vector k4x = v + dt * k3v, k4v = a4;
      x += (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      t = sys.t0 + static_cast<double>(step) * dt;
      if (!x.allFinite() || !v.allFinite()) throw DivergedError("non-finite ODE state", step);
      sample(step);
    }
  } else {
    for (long long step = 1; step <= n_steps; ++step) {
      const Vector k1 = -sys.obj.gradient(x);
      const Vector k2 = -sys.obj.gradient(x + 0.5 * dt * k1);
      const Vector k3 = -sys.obj.gradient(x + 0.5 * dt * k2);
      const Vector k4 = -sys.obj.gradient(x + dt * k3);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = sys.t0 + static_cast<double>(step) * dt;
      if (!x.allFinite()) throw DivergedError("non-finite ODE state", step);
      sample(step);
    }
  }
  trace.V0 = trace.samples.front().lyapunov_V;
  return trace;
}

struct RateReport {
  bool holds = true;
  double max_drift = -std::numeric_limits<double>::infinity();
  double t1 = 0.0;      // realized start of the certified window (C kinds)
  double t1_ref = 0.0;  // the proof's explicit reference t1 (high-res-c)
};

// The proof's explicit t1 for the high-resolution C flow (reported as a
// secondary reference; the realized t1 is searched on samples).
inline double high_res_c_t1_ref(const OdeSystem& sys) {
  const double rs = std::sqrt(sys.s);
  const double bg = sys.beta_over_gamma;
  const double C = sys.r > 2.0 ? 0.0 : bg;
  const double shift = 0.5 * (sys.r + 1.0) - bg;
  double t0s = std::max(sys.t0, 2.0 * std::abs(C) * rs);
  t0s = std::max(t0s, 2.0 * std::abs(shift) * rs);
  if (sys.r > 2.0)
    return std::max(t0s, -(sys.r - 1.0) / (sys.r - 2.0) * shift * rs);
  return std::max(t0s, (4.0 * bg / 3.0) * (bg - 1.5) * rs);
}

// Exponential kinds: V e^{rate (t - t0)} non-increasing up to a drift of
// 1e-6 V0 per unit time. C kinds: V non-increasing from some sampled t1 on,
// with f_gap <= 4 V_{t1} / t^2 beyond it; the earliest such t1 is reported.
inline RateReport check_rate(const OdeTrace& trace, const OdeSystem& sys, double rate) {
  RateReport rep;
  const auto& ss = trace.samples;
  if (ss.size() < 2) return rep;
  const double drift_tol = 1e-6 * std::max(trace.V0, 1.0e-300);

  if (rate > 0.0) {
    auto W = [&](const OdeSample& s) {
      return s.lyapunov_V > 0.0 ? std::exp(rate * (s.t - ss.front().t) + std::log(s.lyapunov_V))
                                : 0.0;
    };
    double prev = W(ss[0]);
    for (std::size_t i = 1; i < ss.size(); ++i) {
      const double cur = W(ss[i]);
      const double dt = ss[i].t - ss[i - 1].t;
      const double drift = (cur - prev) / (dt * std::max(trace.V0, 1.0e-300));
      rep.max_drift = std::max(rep.max_drift, drift);
      if (cur > prev + drift_tol * dt) rep.holds = false;
      prev = cur;
    }
    return rep;
  }

  // 1/t^2 kinds: search the earliest sample index from which both the
  // monotone-V and the 4 V_{t1} / t^2 gap bound hold through the end.
  rep.t1_ref = sys.kind == OdeKind::kHighResC ? high_res_c_t1_ref(sys) : ss.front().t;
  auto window_ok = [&](std::size_t i1) {
    const double Vt1 = ss[i1].lyapunov_V;
    for (std::size_t i = i1; i + 1 < ss.size(); ++i) {
      const double dt = ss[i + 1].t - ss[i].t;
      if (ss[i + 1].lyapunov_V > ss[i].lyapunov_V + drift_tol * dt) return false;
    }
    for (std::size_t i = i1; i < ss.size(); ++i) {
      const double bound = 4.0 * Vt1 / (ss[i].t * ss[i].t);
      if (ss[i].f_gap > bound * (1.0 + 1e-9) + 1e-14) return false;
    }
    return true;
  };
  for (std::size_t i1 = 0; i1 < ss.size(); ++i1) {
    if (window_ok(i1)) {
      rep.t1 = ss[i1].t;
      rep.holds = true;
      return rep;
    }
  }
  rep.holds = false;
  return rep;
}

// Running-infimum gradient bound of the high-resolution C flow:
//   inf_{t1 <= u <= t} |grad f(X_u)|^2 <= 12 V_{t1} / ((beta/gamma) sqrt(s) (t^3 - t1^3)).
inline bool check_inf_grad(const OdeTrace& trace, double t1, double beta_over_gamma,
                           double s) {
  if (beta_over_gamma <= 0.0)
    throw InvalidParameterError("check_inf_grad needs beta/gamma > 0");
  const auto& ss = trace.samples;
  std::size_t i1 = 0;
  while (i1 < ss.size() && ss[i1].t < t1) ++i1;
  if (i1 >= ss.size()) return true;
  const double Vt1 = ss[i1].lyapunov_V;
  const double t1s = ss[i1].t;
  double running_inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = i1; i < ss.size(); ++i) {
    running_inf = std::min(running_inf, ss[i].grad_sq);
    if (ss[i].t <= t1s) continue;
    const double denom = beta_over_gamma * std::sqrt(s) * (std::pow(ss[i].t, 3) - std::pow(t1s, 3));
    const double bound = 12.0 * Vt1 / denom;
    if (running_inf > bound * (1.0 + 1e-9) + 1e-14) return false;
  }
  return true;
}

}  // namespace agm

#endif  // AGM_ODE_HPP
