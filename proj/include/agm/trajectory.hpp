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

#ifndef AGM_TRAJECTORY_HPP
#define AGM_TRAJECTORY_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "agm/problems.hpp"

namespace agm {

struct TrajectoryRecord {
  long long k = 0;
  Vector x;
  double f = 0.0;
  double grad_norm_sq = 0.0;
  std::optional<Vector> y;
  std::optional<Vector> z;
  std::optional<Vector> u;
  std::map<std::string, double> aux;
};

// Per-iteration log of a run. Records are strictly increasing in k; the
// objective gap is only available when f_star is known.
struct Trajectory {
  std::vector<TrajectoryRecord> records;
  double step_size = 0.0;
  std::string algo_id;
  std::optional<double> f_star;

  double gap(std::size_t i) const {
    if (!f_star) return std::numeric_limits<double>::quiet_NaN();
    return records[i].f - *f_star;
  }

  const TrajectoryRecord& back() const { return records.back(); }

  const TrajectoryRecord* find_k(long long k) const {
    for (const auto& r : records)
      if (r.k == k) return &r;
    return nullptr;
  }

  double min_grad_norm_sq() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : records) m = std::min(m, r.grad_norm_sq);
    return m;
  }
};

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CSV schema: header `k,f_gap,grad_norm_sq[,aux...]`, one row per recorded
// iteration, 17 significant digits, LF line endings. Aux columns are the
// scalar aux keys of the first record in sorted order.
inline void write_csv(const Trajectory& traj, std::ostream& out) {
  std::vector<std::string> aux_keys;
  if (!traj.records.empty())
    for (const auto& [key, _] : traj.records.front().aux) aux_keys.push_back(key);
  out << "k,f_gap,grad_norm_sq";
  for (const auto& key : aux_keys) out << "," << key;
  out << "\n";
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& r = traj.records[i];
    out << r.k << "," << format_g17(traj.gap(i)) << "," << format_g17(r.grad_norm_sq);
    for (const auto& key : aux_keys) {
      const auto it = r.aux.find(key);
      out << "," << format_g17(it == r.aux.end() ? std::numeric_limits<double>::quiet_NaN()
                                                 : it->second);
    }
    out << "\n";
  }
}

}  // namespace agm

#endif  // AGM_TRAJECTORY_HPP
