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

#ifndef AGM_PROBLEMS_HPP
#define AGM_PROBLEMS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "agm/errors.hpp"
#include "agm/rng.hpp"

namespace agm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Smooth convex objective oracle. Instances are immutable after
// construction; value/gradient/hvp are pure and safe to call concurrently.
struct Objective {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&, const Vector&)> hvp;
  double L = 0.0;   // smoothness constant
  double mu = 0.0;  // strong-convexity constant, 0 for merely convex
  std::optional<Vector> minimizer;
  std::optional<double> f_star;
  std::string name;

  double gap(const Vector& x) const {
    if (!f_star) return std::numeric_limits<double>::quiet_NaN();
    return value(x) - *f_star;
  }
};

// Largest eigenvalue of a symmetric PSD matrix by power iteration, to a
// relative tolerance of 1e-10 with at most 10,000 iterations. The start
// vector is drawn from the given generator so the estimate is deterministic.
inline double power_iteration_lmax(const Matrix& A, Rng& rng, double rel_tol = 1e-10,
                                   int max_iters = 10000) {
  const int n = static_cast<int>(A.rows());
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal01();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = A * v;
    const double lambda_new = v.dot(w);
    w.normalize();
    v = w;
    if (it > 0 && std::abs(lambda_new - lambda) <= rel_tol * std::abs(lambda_new)) {
      return lambda_new;
    }
    lambda = lambda_new;
  }
  return lambda;
}

// Smallest eigenvalue estimate by inverse power iteration on a cached
// factorization. Best effort: returns 0 when the factorization is unusable.
inline double inverse_power_iteration_lmin(const Matrix& A, Rng& rng, double rel_tol = 1e-10,
                                           int max_iters = 10000) {
  Eigen::LDLT<Matrix> ldlt(A);
  if (ldlt.info() != Eigen::Success) return 0.0;
  const int n = static_cast<int>(A.rows());
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal01();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = ldlt.solve(v);
    const double norm = w.norm();
    if (!std::isfinite(norm) || norm == 0.0) return 0.0;
    w /= norm;
    const double lambda_new = w.dot(A * w);
    v = w;
    if (it > 0 && std::abs(lambda_new - lambda) <= rel_tol * std::abs(lambda_new)) {
      return std::max(lambda_new, 0.0);
    }
    lambda = lambda_new;
  }
  return std::max(lambda, 0.0);
}

// f(x) = d1*x1^2 + d2*x2^2 on R^2.
inline Objective make_diag_quadratic(double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0)
    throw InvalidParameterError("diag quadratic needs positive coefficients");
  Objective obj;
  obj.dim = 2;
  obj.name = "diag-quadratic-2d";
  obj.value = [d1, d2](const Vector& x) { return d1 * x(0) * x(0) + d2 * x(1) * x(1); };
  obj.gradient = [d1, d2](const Vector& x) {
    Vector g(2);
    g << 2.0 * d1 * x(0), 2.0 * d2 * x(1);
    return g;
  };
  obj.hvp = [d1, d2](const Vector&, const Vector& v) {
    Vector h(2);
    h << 2.0 * d1 * v(0), 2.0 * d2 * v(1);
    return h;
  };
  obj.L = 2.0 * std::max(d1, d2);
  obj.mu = 2.0 * std::min(d1, d2);
  obj.minimizer = Vector::Zero(2);
  obj.f_star = 0.0;
  return obj;
}

// 1-D f(x) = mu*x^2/2, the harmonic-oscillator potential.
inline Objective make_scalar_quadratic(double mu) {
  if (mu <= 0.0) throw InvalidParameterError("scalar quadratic needs mu > 0");
  Objective obj;
  obj.dim = 1;
  obj.name = "scalar-quadratic";
  obj.value = [mu](const Vector& x) { return 0.5 * mu * x(0) * x(0); };
  obj.gradient = [mu](const Vector& x) {
    Vector g(1);
    g << mu * x(0);
    return g;
  };
  obj.hvp = [mu](const Vector&, const Vector& v) {
    Vector h(1);
    h << mu * v(0);
    return h;
  };
  obj.L = mu;
  obj.mu = mu;
  obj.minimizer = Vector::Zero(1);
  obj.f_star = 0.0;
  return obj;
}

// f(x) = x'Ax/2 + b'x with A = B'B, entries of B and b i.i.d. Uniform(0,1).
// Draw order is fixed: B row by row, then b; this pins the instance for a
// given seed. L is the spectral norm of A (power iteration); the minimizer
// solves Ax = -b directly with iterative refinement, falling back to a
// least-squares solve when the factorization fails.
inline Objective make_random_quadratic(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidParameterError("random quadratic needs n >= 1");
  Rng rng(seed);
  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = rng.uniform01();
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = rng.uniform01();

  auto A = std::make_shared<Matrix>(B.transpose() * B);
  auto bp = std::make_shared<Vector>(std::move(b));

  Objective obj;
  obj.dim = n;
  obj.name = "random-quadratic";
  obj.value = [A, bp](const Vector& x) { return 0.5 * x.dot(*A * x) + bp->dot(x); };
  obj.gradient = [A, bp](const Vector& x) { return Vector(*A * x + *bp); };
  obj.hvp = [A](const Vector&, const Vector& v) { return Vector(*A * v); };

  obj.L = power_iteration_lmax(*A, rng);

  Eigen::LDLT<Matrix> ldlt(*A);
  Vector xstar;
  bool solved = false;
  if (ldlt.info() == Eigen::Success) {
    xstar = ldlt.solve(-*bp);
    for (int pass = 0; pass < 4; ++pass) {
      Vector r = -*bp - *A * xstar;
      xstar += ldlt.solve(r);
    }
    solved = xstar.allFinite() &&
             (*A * xstar + *bp).norm() <= 1e-9 * obj.L * (1.0 + xstar.norm());
  }
  if (!solved) {
    // Singular (or numerically unusable) A: least-squares minimizer, mu = 0.
    xstar = A->colPivHouseholderQr().solve(-*bp);
    obj.mu = 0.0;
  } else {
    obj.mu = inverse_power_iteration_lmin(*A, rng);
  }
  obj.minimizer = xstar;
  obj.f_star = obj.value(xstar);
  return obj;
}

// f(x) = rho * log sum_i exp((a_i'x - b_i)/rho) with a_i the columns of an
// n-by-m matrix A. Entries of A (column by column) and b are i.i.d. N(0,1).
// Always evaluated with max-subtraction; Figure-scale step sizes overflow
// the naive exponentials. L is the standard softmax bound |A|^2/rho. The
// minimizer has no closed form; f_star is filled later from a reference run.
inline Objective make_log_sum_exp(int n, int m, double rho, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidParameterError("log-sum-exp needs n, m >= 1");
  if (rho <= 0.0) throw InvalidParameterError("log-sum-exp needs rho > 0");
  Rng rng(seed);
  auto A = std::make_shared<Matrix>(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) (*A)(i, j) = rng.normal01();
  auto b = std::make_shared<Vector>(m);
  for (int i = 0; i < m; ++i) (*b)(i) = rng.normal01();

  auto softmax = [A, b, rho](const Vector& x) {
    Vector z = (A->transpose() * x - *b) / rho;
    const double zmax = z.maxCoeff();
    Vector p = (z.array() - zmax).exp();
    const double total = p.sum();
    p /= total;
    return std::make_pair(p, rho * (zmax + std::log(total)));
  };

  Objective obj;
  obj.dim = n;
  obj.name = "log-sum-exp";
  obj.value = [softmax](const Vector& x) { return softmax(x).second; };
  obj.gradient = [A, softmax](const Vector& x) { return Vector(*A * softmax(x).first); };
  obj.hvp = [A, softmax, rho](const Vector& x, const Vector& v) {
    const Vector p = softmax(x).first;
    const Vector g = *A * p;
    const Vector t = A->transpose() * v;
    return Vector(((*A * (p.cwiseProduct(t))) - g * (g.dot(v))) / rho);
  };

  const Matrix gram = *A * A->transpose();  // n x n, lmax = |A|^2
  obj.L = power_iteration_lmax(gram, rng) / rho;
  obj.mu = 0.0;
  return obj;
}

// Instance description; identical (kind, parameters, seed) rebuild
// bit-identical objectives. Text form: the kind token followed by
// key=value pairs, e.g. "log-sum-exp n=50 m=200 rho=20 seed=7".
struct ProblemSpec {
  std::string kind;
  double d1 = 5e-3, d2 = 1.0;  // diag-quadratic-2d
  int n = 2, m = 1;
  double rho = 1.0;
  double mu = 1.0;  // scalar-quadratic
  std::uint64_t seed = 0;

  Objective build() const {
    if (kind == "diag-quadratic-2d") return make_diag_quadratic(d1, d2);
    if (kind == "random-quadratic") return make_random_quadratic(n, seed);
    if (kind == "log-sum-exp") return make_log_sum_exp(n, m, rho, seed);
    if (kind == "scalar-quadratic") return make_scalar_quadratic(mu);
    throw InvalidParameterError("unknown problem kind: " + kind);
  }

  std::string print() const {
    std::ostringstream out;
    out.precision(17);
    out << kind;
    if (kind == "diag-quadratic-2d") {
      out << " d1=" << d1 << " d2=" << d2;
    } else if (kind == "random-quadratic") {
      out << " n=" << n << " seed=" << seed;
    } else if (kind == "log-sum-exp") {
      out << " n=" << n << " m=" << m << " rho=" << rho << " seed=" << seed;
    } else if (kind == "scalar-quadratic") {
      out << " mu=" << mu;
    }
    return out.str();
  }

  static ProblemSpec parse(const std::string& text) {
    std::istringstream in(text);
    ProblemSpec spec;
    if (!(in >> spec.kind)) throw ConfigError("empty problem spec");
    if (spec.kind != "diag-quadratic-2d" && spec.kind != "random-quadratic" &&
        spec.kind != "log-sum-exp" && spec.kind != "scalar-quadratic")
      throw ConfigError("unknown problem kind: " + spec.kind);
    std::string token;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + token);
      const std::string key = token.substr(0, eq);
      const std::string val = token.substr(eq + 1);
      try {
        if (key == "d1") spec.d1 = std::stod(val);
        else if (key == "d2") spec.d2 = std::stod(val);
        else if (key == "n") spec.n = std::stoi(val);
        else if (key == "m") spec.m = std::stoi(val);
        else if (key == "rho") spec.rho = std::stod(val);
        else if (key == "mu") spec.mu = std::stod(val);
        else if (key == "seed") spec.seed = std::stoull(val);
        else throw ConfigError("unknown problem key: " + key);
      } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for " + key + ": " + val);
      }
    }
    return spec;
  }
};

}  // namespace agm

#endif  // AGM_PROBLEMS_HPP
