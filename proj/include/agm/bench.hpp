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

#ifndef AGM_BENCH_HPP
#define AGM_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include "agm/config.hpp"
#include "agm/lyapunov.hpp"
#include "agm/transforms.hpp"

namespace agm {

// Builds the parameter objects named by an AlgoSpec and runs the method.
// Algorithms whose Lyapunov function is implemented run in their
// three-variable form when `for_monitor` is set.
inline Trajectory dispatch_algo(const RunConfig& cfg, const Objective& obj, double s,
                                const Vector& x0, const RunOptions& opts,
                                bool for_monitor = false) {
  const AlgoSpec& a = cfg.algo;
  const long long k = cfg.k_max;
  if (a.id == "gd") return run_gd(obj, s, x0, k, opts);
  if (a.id == "nag-sc") {
    if (for_monitor)
      return run_extended_nag_sc(obj, s, ScParams::constants(1, 1, 1), x0, k, opts, "nag-sc");
    return run_nag_sc(obj, s, x0, k, opts);
  }
  if (a.id == "heavy-ball") return run_heavy_ball(obj, s, x0, k, opts);
  if (a.id == "tmm") return run_tmm(obj, s, x0, k, opts);
  if (a.id == "extended-nag-sc") {
    ScParams p{parse_series(a.get("eta", "1")), parse_series(a.get("nu", "1")),
               parse_series(a.get("tau", "1"))};
    return run_extended_nag_sc(obj, s, p, x0, k, opts);
  }
  if (a.id == "single-var-sc") {
    SingleVarScParams p(std::stod(a.get("c0", "1")), std::stod(a.get("c1", "2")),
                        std::stod(a.get("c2", "1.5")), parse_series(a.get("r1", "0")),
                        parse_series(a.get("r2", "0")), parse_series(a.get("r3", "0")),
                        parse_series(a.get("h1", "1")));
    return run_single_var_sc(obj, s, p, x0, k, opts);
  }
  if (a.id == "nag-c" || a.id == "extended-nag-c") {
    CSeqParams p;
    if (a.has("alpha")) p.alpha = parse_sequence(a.get("alpha", ""));
    else p.alpha = Sequence::rational_alpha(std::stod(a.get("r", "2")));
    p.beta = parse_sequence(a.get("beta", "1"));
    p.gamma = parse_sequence(a.get("gamma", "1"));
    const std::string form = a.get("form", for_monitor ? "three-var" : "single-var");
    const CForm f = for_monitor                ? CForm::kThreeVar
                    : form == "two-var"        ? CForm::kTwoVar
                    : form == "three-var"      ? CForm::kThreeVar
                                               : CForm::kSingleVar;
    return run_extended_nag_c(obj, s, p, x0, k, f, opts);
  }
  if (a.id == "hag") {
    HagParams p;
    p.a = parse_sequence(a.get("a", "0.5"));
    p.b = parse_sequence(a.get("b", "1.5"));
    p.phi = parse_sequence(a.get("phi", "1"));
    const HagForm f = a.get("form", "two-var") == "single-var" ? HagForm::kSingleVar
                                                               : HagForm::kTwoVar;
    return run_hag(obj, s, p, x0, k, f, opts);
  }
  if (a.id == "hag-sc") {
    HagParams p = hag_sc_config(std::stod(a.get("c0", "1")), std::stod(a.get("c1", "2")),
                                std::stod(a.get("c2", "1.5")), s, obj.mu);
    const HagForm f = a.get("form", "two-var") == "single-var" ? HagForm::kSingleVar
                                                               : HagForm::kTwoVar;
    return run_hag(obj, s, p, x0, k, f, opts);
  }
  if (a.id == "hag-c") {
    Sequence alpha = a.has("alpha") ? parse_sequence(a.get("alpha", ""))
                                    : Sequence::rational_alpha(std::stod(a.get("r", "2")));
    HagParams p = hag_c_config(std::stod(a.get("c0", "1")), std::stod(a.get("c2", "1.5")), s,
                               alpha);
    const HagForm f = a.get("form", "two-var") == "single-var" ? HagForm::kSingleVar
                                                               : HagForm::kTwoVar;
    return run_hag(obj, s, p, x0, k, f, opts);
  }
  throw ConfigError("unknown algo id: " + a.id);
}

// CSV emitted by `agm monitor`: k,V,ratio,target_ratio,lemma_residual.
inline void write_monitor_csv(const RunConfig& cfg, const Objective& obj,
                              const Trajectory& traj, double s, std::ostream& out) {
  const AlgoSpec& a = cfg.algo;
  out << "k,V,ratio,target_ratio,lemma_residual\n";
  if (a.id == "nag-sc" || a.id == "tmm" || a.id == "extended-nag-sc") {
    ScParams p = a.id == "nag-sc"   ? ScParams::constants(1, 1, 1)
                 : a.id == "tmm"    ? ScParams::constants(1, 1, 2)
                                    : ScParams{parse_series(a.get("eta", "1")),
                                               parse_series(a.get("nu", "1")),
                                               parse_series(a.get("tau", "1"))};
    const auto trace = eval_lyapunov_sc(traj, obj, p, s);
    for (std::size_t i = 0; i < trace.V.size(); ++i) {
      out << trace.k[i] << "," << format_g17(trace.V[i]) << "," << format_g17(trace.ratio[i])
          << "," << format_g17(trace.target_ratio) << ","
          << format_g17(trace.lemma1_residual[i]) << "\n";
    }
    return;
  }
  if (a.id == "nag-c" || a.id == "extended-nag-c") {
    CSeqParams p;
    if (a.has("alpha")) p.alpha = parse_sequence(a.get("alpha", ""));
    else p.alpha = Sequence::rational_alpha(std::stod(a.get("r", "2")));
    p.beta = parse_sequence(a.get("beta", "1"));
    p.gamma = parse_sequence(a.get("gamma", "1"));
    std::optional<double> fstar = cfg.fstar_override;
    const auto trace = eval_lyapunov_c(traj, obj, p, s, OmegaChoice::kAuto, std::nullopt, fstar);
    for (std::size_t i = 0; i < trace.V.size(); ++i) {
      const double ratio = i > 0 && trace.V[i - 1] != 0.0
                               ? trace.V[i] / trace.V[i - 1]
                               : std::numeric_limits<double>::quiet_NaN();
      out << trace.k[i] << "," << format_g17(trace.V[i]) << "," << format_g17(ratio) << ",1,"
          << format_g17(trace.lemma3_residual[i]) << "\n";
    }
    return;
  }
  throw ConfigError("monitor supports nag-sc, tmm, extended-nag-sc, nag-c, extended-nag-c");
}

// Executes a parsed config. Exit status: 0 success, 2 diverged, 1 config
// error; a one-line diagnostic goes to `err`.
inline int run_config(const RunConfig& cfg, std::ostream& err = std::cerr) {
  try {
    Objective obj = cfg.problem.build();
    const double s = cfg.s.resolve(obj, cfg.problem);
    Vector x0;
    if (cfg.x0.empty()) {
      x0 = Vector::Ones(obj.dim);
    } else {
      if (static_cast<int>(cfg.x0.size()) != obj.dim)
        throw ConfigError("x0 dimension mismatch");
      x0 = Eigen::Map<const Vector>(cfg.x0.data(), cfg.x0.size());
    }
    RunOptions opts;
    opts.f_star_override = cfg.fstar_override;

    const bool wants_monitor =
        std::any_of(cfg.outputs.begin(), cfg.outputs.end(),
                    [](const OutputSpec& o) { return o.monitor; });
    Trajectory traj = dispatch_algo(cfg, obj, s, x0, opts, wants_monitor);

    for (const auto& spec : cfg.outputs) {
      std::ofstream out(spec.csv_path, std::ios::binary);
      if (!out) throw ConfigError("cannot open output file: " + spec.csv_path);
      if (spec.monitor) write_monitor_csv(cfg, obj, traj, s, out);
      else write_csv(traj, out);
    }
    if (cfg.outputs.empty()) write_csv(traj, std::cout);
    return 0;
  } catch (const DivergedError& e) {
    err << "diverged: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error (line " << e.line_number << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run_config_text(const std::string& text, std::ostream& err = std::cerr) {
  try {
    return run_config(parse_run_config(text), err);
  } catch (const ConfigError& e) {
    err << "config error (line " << e.line_number << "): " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------------
// Figure suites
// ---------------------------------------------------------------------------

enum class FigureId { kS1, kS2, kS3 };

struct FigureSuite {
  FigureId id = FigureId::kS1;
  std::uint64_t seed = 11;
  long long k_max = 0;  // 0 = suite default
  int workers = 0;      // 0 = hardware concurrency

  long long default_k() const {
    switch (id) {
      case FigureId::kS1: return 3000;
      case FigureId::kS2: return 5000;
      case FigureId::kS3: return 3000;
    }
    return 3000;
  }
};

struct FigureCell {
  std::string name;          // deterministic file stem
  std::string problem_tag;   // e.g. "ill"/"well" for S1
  double c1 = 0, c2 = 0;     // S1
  double r = 0, beta = 0;    // S2/S3
  double s_display = 0;      // the s grid value as printed in the figure
  double s = 0;              // resolved step size
  long long iters_to_1e8 = -1;
  double terminal_f_gap = 0;
  double terminal_min_grad = 0;
  bool diverged = false;
};

// Reference f* fixture for the log-sum-exp instance, produced by a long
// NAG-C run (the instance has no closed-form minimizer). f*_ref is the
// smallest objective value seen along the run; the gradient norm achieved
// there is recorded, and the fixture counts as low-confidence above 1e-8.
struct FstarFixture {
  double f_star = 0.0;
  double grad_norm = 0.0;
  long long k = 0;
  double s = 0.0;
  std::uint64_t seed = 0;
  bool low_confidence = false;
  Vector x_ref;
};

inline FstarFixture compute_reference_fstar(std::uint64_t seed, long long k_max = 100000,
                                            double s = 0.5) {
  const Objective obj = make_log_sum_exp(50, 200, 20.0, seed);
  const Vector x0 = Vector::Ones(obj.dim);
  CSeqParams nagc;  // r = 2, beta = gamma = 1
  RunOptions opts;
  opts.dense_until = k_max;  // keep all records; the argmin matters
  Trajectory traj = run_extended_nag_c(obj, s, nagc, x0, k_max, CForm::kSingleVar, opts);
  std::size_t best = 0;
  for (std::size_t i = 1; i < traj.records.size(); ++i)
    if (traj.records[i].f < traj.records[best].f) best = i;
  FstarFixture fx;
  fx.f_star = traj.records[best].f;
  fx.grad_norm = std::sqrt(traj.records[best].grad_norm_sq);
  fx.k = k_max;
  fx.s = s;
  fx.seed = seed;
  fx.low_confidence = fx.grad_norm > 1e-8;
  fx.x_ref = traj.records[best].x;
  return fx;
}

inline void save_fstar_fixture(const FstarFixture& fx, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open fixture file: " + path);
  out << "f_star = " << format_g17(fx.f_star) << "\n";
  out << "grad_norm = " << format_g17(fx.grad_norm) << "\n";
  out << "k = " << fx.k << "\n";
  out << "s = " << format_g17(fx.s) << "\n";
  out << "seed = " << fx.seed << "\n";
  out << "low_confidence = " << (fx.low_confidence ? 1 : 0) << "\n";
  out << "x_ref = ";
  for (int i = 0; i < fx.x_ref.size(); ++i) out << (i ? "," : "") << format_g17(fx.x_ref(i));
  out << "\n";
}

inline FstarFixture load_fstar_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture file: " + path);
  FstarFixture fx;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "f_star") fx.f_star = std::stod(val);
    else if (key == "grad_norm") fx.grad_norm = std::stod(val);
    else if (key == "k") fx.k = std::stoll(val);
    else if (key == "s") fx.s = std::stod(val);
    else if (key == "seed") fx.seed = std::stoull(val);
    else if (key == "low_confidence") fx.low_confidence = val == "1";
    else if (key == "x_ref") {
      const auto vals = parse_double_list(val);
      fx.x_ref = Eigen::Map<const Vector>(vals.data(), vals.size());
    }
  }
  return fx;
}

namespace detail {

inline std::string cell_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

inline void run_cells(std::vector<FigureCell>& cells,
                      const std::function<void(FigureCell&)>& body, int workers) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      body(cells[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<int>(workers, static_cast<int>(cells.size())); ++t)
    pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline void fill_cell_stats(FigureCell& cell, const Trajectory& traj, double f_star) {
  double min_grad = std::numeric_limits<double>::infinity();
  for (const auto& r : traj.records) min_grad = std::min(min_grad, r.grad_norm_sq);
  cell.terminal_f_gap = traj.records.back().f - f_star;
  cell.terminal_min_grad = min_grad;
  // Iterations until the gap stays below 1e-8. Under-damped runs oscillate
  // through many orders of magnitude, so a first-touch statistic would
  // reward transient dips rather than convergence.
  cell.iters_to_1e8 = -1;
  for (std::size_t i = traj.records.size(); i-- > 0;) {
    if (traj.records[i].f - f_star > 1e-8) {
      if (i + 1 < traj.records.size()) cell.iters_to_1e8 = traj.records[i + 1].k;
      return;
    }
  }
  cell.iters_to_1e8 = traj.records.front().k;
}

}  // namespace detail

// Runs a figure suite: one trajectory CSV per grid cell plus summary.csv
// (iterations to a 1e-8 gap or -1, terminal gap, terminal min grad^2).
// Cells run on a worker pool; output naming depends only on the grid cell.
inline std::vector<FigureCell> run_figure(const FigureSuite& suite, const std::string& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  const long long k_max = suite.k_max > 0 ? suite.k_max : suite.default_k();
  std::vector<FigureCell> cells;

  if (suite.id == FigureId::kS1) {
    const Objective ill = make_diag_quadratic(5e-3, 1.0);
    const Objective well = make_diag_quadratic(0.5, 1.0);
    for (const char* tag : {"ill", "well"})
      for (double c1 : {1.0, 2.0})
        for (double c2 : {0.5, 1.0, 1.5})
          for (double s : {0.01, 0.05, 0.1}) {
            FigureCell cell;
            cell.problem_tag = tag;
            cell.c1 = c1;
            cell.c2 = c2;
            cell.s_display = s;
            cell.s = s;
            cell.name = std::string("s1_") + tag + "_c1=" + detail::cell_number(c1) +
                        "_c2=" + detail::cell_number(c2) + "_s=" + detail::cell_number(s);
            cells.push_back(cell);
          }
    detail::run_cells(
        cells,
        [&](FigureCell& cell) {
          const Objective& obj = cell.problem_tag == std::string("ill") ? ill : well;
          Vector x0(2);
          x0 << 1.0, 1.0;
          const double w = std::sqrt(obj.mu * cell.s);
          RunOptions opts;
          opts.x1_override = Vector(x0 - (2.0 * cell.s / (1.0 + w)) * obj.gradient(x0));
          SingleVarScParams p(1.0, cell.c1, cell.c2);
          try {
            Trajectory traj = run_single_var_sc(obj, cell.s, p, x0, k_max, opts);
            detail::fill_cell_stats(cell, traj, *obj.f_star);
            std::ofstream out(fs::path(outdir) / (cell.name + ".csv"), std::ios::binary);
            write_csv(traj, out);
          } catch (const DivergedError&) {
            cell.diverged = true;
          }
        },
        suite.workers);
  } else {
    const bool s2 = suite.id == FigureId::kS2;
    const Objective obj = s2 ? make_random_quadratic(500, suite.seed)
                             : make_log_sum_exp(50, 200, 20.0, suite.seed);
    double f_star;
    FstarFixture fx;
    if (s2) {
      f_star = *obj.f_star;
    } else {
      fx = compute_reference_fstar(suite.seed);
      save_fstar_fixture(fx, (fs::path(outdir) / "fstar.txt").string());
      f_star = fx.f_star;
    }
    const std::vector<double> s_grid = s2 ? std::vector<double>{0.05, 0.1, 0.3}
                                          : std::vector<double>{0.5, 1.0, 5.0};
    for (double r : {1.0, 2.0})
      for (double beta : {0.0, 0.5, 1.0})
        for (double sg : s_grid) {
          FigureCell cell;
          cell.problem_tag = s2 ? "quad500" : "lse";
          cell.r = r;
          cell.beta = beta;
          cell.s_display = sg;
          cell.s = s2 ? sg / obj.L : sg;  // S2 steps are x/|A| and L = |A|
          cell.name = std::string(s2 ? "s2" : "s3") + "_r=" + detail::cell_number(r) +
                      "_beta=" + detail::cell_number(beta) + "_s=" + detail::cell_number(sg);
          cells.push_back(cell);
        }
    detail::run_cells(
        cells,
        [&](FigureCell& cell) {
          const Vector x0 = Vector::Ones(obj.dim);
          CSeqParams p;
          p.alpha = Sequence::rational_alpha(cell.r);
          p.beta = Sequence::constant(cell.beta);
          p.gamma = Sequence::constant(1.0);
          RunOptions opts;
          opts.f_star_override = f_star;
          try {
            Trajectory traj =
                run_extended_nag_c(obj, cell.s, p, x0, k_max, CForm::kSingleVar, opts);
            detail::fill_cell_stats(cell, traj, f_star);
            std::ofstream out(fs::path(outdir) / (cell.name + ".csv"), std::ios::binary);
            write_csv(traj, out);
          } catch (const DivergedError&) {
            cell.diverged = true;
          }
        },
        suite.workers);
  }

  std::ofstream summary(fs::path(outdir) / "summary.csv", std::ios::binary);
  summary << "name,problem,c1,c2,r,beta,s_display,s,iters_to_1e8,terminal_f_gap,"
             "terminal_min_grad,diverged\n";
  for (const auto& c : cells) {
    summary << c.name << "," << c.problem_tag << "," << c.c1 << "," << c.c2 << "," << c.r << ","
            << c.beta << "," << c.s_display << "," << format_g17(c.s) << "," << c.iters_to_1e8
            << "," << format_g17(c.terminal_f_gap) << "," << format_g17(c.terminal_min_grad)
            << "," << (c.diverged ? 1 : 0) << "\n";
  }
  return cells;
}

}  // namespace agm

#endif  // AGM_BENCH_HPP
