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

#ifndef AGM_SEQUENCES_HPP
#define AGM_SEQUENCES_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "agm/errors.hpp"

namespace agm {

// A deterministic scalar sequence k -> value, k >= 0. Recursive kinds
// (FISTA, the alternating rule) memoize into a growable table guarded by a
// mutex, so a generator may be shared across trajectories running in
// parallel. Closed-form kinds evaluate directly.
class Sequence {
 public:
  Sequence() : label_("const:0"), eval_([](long long) { return 0.0; }) {}

  static Sequence constant(double value) {
    Sequence s;
    s.label_ = "const:" + std::to_string(value);
    s.eval_ = [value](long long) { return value; };
    return s;
  }

  // alpha_k = (k + r) / r
  static Sequence rational_alpha(double r) {
    if (r <= 0.0) throw InvalidParameterError("rational alpha needs r > 0");
    Sequence s;
    s.label_ = "rational:" + std::to_string(r);
    s.eval_ = [r](long long k) { return (static_cast<double>(k) + r) / r; };
    return s;
  }

  // alpha_0 = 1, alpha_{k+1} = (1 + sqrt(1 + 4 alpha_k^2)) / 2
  static Sequence fista_alpha() {
    Sequence s;
    s.label_ = "fista";
    auto memo = std::make_shared<Memo>();
    memo->table.push_back(1.0);
    s.eval_ = [memo](long long k) {
      return memo->at(k, [](double prev) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * prev * prev)); });
    };
    return s;
  }

  // Alternating rule: alpha_k = (k+r)/r for even k and the FISTA recursion
  // applied to alpha_{k-1} for odd k, starting from alpha_0 = 1.
  static Sequence alternating_alpha(double r) {
    if (r <= 0.0) throw InvalidParameterError("alternating alpha needs r > 0");
    Sequence s;
    s.label_ = "alternating:" + std::to_string(r);
    auto memo = std::make_shared<Memo>();
    memo->table.push_back(1.0);
    s.eval_ = [memo, r](long long k) {
      return memo->at_indexed(k, [r](long long i, double prev) {
        if (i % 2 == 0) return (static_cast<double>(i) + r) / r;
        return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * prev * prev));
      });
    };
    return s;
  }

  static Sequence table(std::vector<double> values, double tail_value) {
    Sequence s;
    s.label_ = "table";
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    s.eval_ = [data, tail_value](long long k) {
      if (k >= 0 && k < static_cast<long long>(data->size())) return (*data)[k];
      return tail_value;
    };
    return s;
  }

  static Sequence from_function(std::string label, std::function<double(long long)> fn) {
    Sequence s;
    s.label_ = std::move(label);
    s.eval_ = std::move(fn);
    return s;
  }

  double operator()(long long k) const { return eval_(k); }
  const std::string& label() const { return label_; }

 private:
  struct Memo {
    std::mutex mu;
    std::vector<double> table;

    double at(long long k, const std::function<double(double)>& step) {
      std::lock_guard<std::mutex> lock(mu);
      while (static_cast<long long>(table.size()) <= k) table.push_back(step(table.back()));
      return table[k];
    }

    double at_indexed(long long k, const std::function<double(long long, double)>& step) {
      std::lock_guard<std::mutex> lock(mu);
      while (static_cast<long long>(table.size()) <= k) {
        const long long i = static_cast<long long>(table.size());
        table.push_back(step(i, table.back()));
      }
      return table[k];
    }
  };

  std::string label_;
  std::function<double(long long)> eval_;
};

// sigma_{k+1} = (alpha_k - 1) / alpha_{k+1}, the extrapolation coefficient
// shared by every alpha-driven method.
inline double sigma_from_alpha(const Sequence& alpha, long long k_plus_1) {
  const double denom = alpha(k_plus_1);
  if (denom <= 0.0)
    throw InvalidParameterError("alpha_k must stay positive (k=" + std::to_string(k_plus_1) + ")");
  return (alpha(k_plus_1 - 1) - 1.0) / denom;
}

}  // namespace agm

#endif  // AGM_SEQUENCES_HPP
