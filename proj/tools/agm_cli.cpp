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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "agm/agm.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw agm::ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_verdict(const agm::Verdict& v) {
  std::cout << agm::to_string(v.status) << " " << (v.clause.empty() ? "-" : v.clause) << " "
            << agm::to_string(v.regime);
  for (const auto& [key, val] : v.certificate) std::cout << " " << key << "=" << val;
  std::cout << "\n";
}

void print_series(const char* name, const agm::SqrtQSeries& s) {
  std::cout << name << " = ";
  for (int i = 0; i <= s.degree(); ++i) std::cout << (i ? "," : "") << agm::format_g17(s.coeff(i));
  std::cout << "\n";
}

int cmd_check(const std::string& family, const std::string& eta, const std::string& nu,
              const std::string& tau, const std::string& alpha, const std::string& beta,
              const std::string& gamma, double c0, double c1, double c2, long long k_max) {
  using namespace agm;
  if (family == "sc-const") {
    const double e0 = parse_series(eta).coeff(0);
    const double n0 = parse_series(nu).coeff(0);
    const double t0 = parse_series(tau).coeff(0);
    print_verdict(check_thm1(e0, n0, t0));
    const auto [I, II] = series_I_II(ScParams::constants(e0, n0, t0));
    print_verdict(classify_lemma_s2(I, II));
    return 0;
  }
  if (family == "sc-series") {
    const ScParams p{parse_series(eta), parse_series(nu), parse_series(tau)};
    print_verdict(check_thm2(p));
    print_verdict(check_thm3(p));
    const auto [I, II] = series_I_II(p);
    print_verdict(classify_lemma_s2(I, II));
    return 0;
  }
  if (family == "c-seq") {
    CSeqParams p{parse_sequence(alpha), parse_sequence(beta), parse_sequence(gamma)};
    print_verdict(check_thm4(p, k_max));
    return 0;
  }
  if (family == "cor1") {
    print_verdict(check_cor1(c0, c1, c2));
    return 0;
  }
  std::cerr << "unknown family: " << family << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accelerated gradient method laboratory"};
  app.require_subcommand(1);

  // ---- run ----
  std::string cfg_path;
  auto* run = app.add_subcommand("run", "run a config and write trajectory CSVs");
  run->add_option("config", cfg_path, "config file")->required();

  // ---- monitor ----
  std::string mon_path;
  auto* monitor = app.add_subcommand("monitor", "run algorithm plus Lyapunov monitor");
  monitor->add_option("config", mon_path, "config file")->required();

  // ---- check ----
  std::string family, eta = "1", nu = "1", tau = "1";
  std::string alpha = "rational:2", beta = "1", gamma = "1";
  double cc0 = 1, cc1 = 2, cc2 = 1.5;
  long long check_k_max = 100000;
  auto* check = app.add_subcommand("check", "evaluate acceleration conditions");
  check->add_option("--family", family, "sc-const | sc-series | c-seq | cor1")->required();
  check->add_option("--eta", eta, "sqrt(q)-coefficient list");
  check->add_option("--nu", nu, "sqrt(q)-coefficient list");
  check->add_option("--tau", tau, "sqrt(q)-coefficient list");
  check->add_option("--alpha", alpha, "sequence spec (rational:r | fista | lemma5:r | table:...)");
  check->add_option("--beta", beta, "sequence spec or constant");
  check->add_option("--gamma", gamma, "sequence spec or constant");
  check->add_option("--c0", cc0);
  check->add_option("--c1", cc1);
  check->add_option("--c2", cc2);
  check->add_option("--k-max", check_k_max, "horizon for sequence checks");

  // ---- ode ----
  std::string ode_kind = "gradient-flow", ode_problem = "scalar-quadratic mu=1";
  std::string ode_out;
  double o_c0 = 1, o_c1 = 2, o_r = 2, o_bg = 1, o_s = 0.01, o_mu = 1, o_dt = 1e-3, o_tmax = 10;
  long long o_stride = 1;
  auto* ode = app.add_subcommand("ode", "integrate a limiting ODE with its Lyapunov monitor");
  ode->add_option("--kind", ode_kind,
                  "gradient-flow | low-res-sc | low-res-c | high-res-nag-sc | high-res-hb | "
                  "high-res-c")
      ->required();
  ode->add_option("--c0", o_c0);
  ode->add_option("--c1", o_c1);
  ode->add_option("--r", o_r);
  ode->add_option("--beta-gamma", o_bg, "beta/gamma weight of the Hessian term");
  ode->add_option("--s", o_s);
  ode->add_option("--mu", o_mu, "mu of the default scalar quadratic");
  ode->add_option("--dt", o_dt);
  ode->add_option("--t-max", o_tmax);
  ode->add_option("--problem", ode_problem, "problem spec (defaults to scalar-quadratic)");
  ode->add_option("--stride", o_stride, "sample stride");
  ode->add_option("--out", ode_out, "output CSV (stdout when absent)");

  // ---- convert ----
  std::string cv_eta = "1", cv_nu = "1", cv_tau = "1";
  std::string cv_r1 = "0", cv_r2 = "0", cv_r3 = "0", cv_h1 = "1";
  double cv_q = 0.01, cv_c0 = 2, cv_c1 = 3, cv_gc0 = 1;
  bool cv_to_single = false, cv_to_three = false;
  auto* convert = app.add_subcommand("convert", "translate between parameterizations");
  convert->add_flag("--to-single", cv_to_single, "three-variable -> single-variable");
  convert->add_flag("--to-three", cv_to_three, "single-variable -> three-variable");
  convert->add_option("--eta", cv_eta);
  convert->add_option("--nu", cv_nu);
  convert->add_option("--tau", cv_tau);
  convert->add_option("--q", cv_q, "working q = mu*s for pointwise output");
  convert->add_option("--c0", cv_c0);
  convert->add_option("--c1", cv_c1);
  convert->add_option("--gc0", cv_gc0, "leading gradient-correction constant (= eta0)");
  convert->add_option("--r1", cv_r1);
  convert->add_option("--r2", cv_r2);
  convert->add_option("--r3", cv_r3);
  convert->add_option("--h1", cv_h1);

  // ---- bench ----
  std::string bench_suite, bench_outdir = "bench-out";
  std::uint64_t bench_seed = 11;
  long long bench_k = 0;
  int bench_workers = 0;
  auto* bench = app.add_subcommand("bench", "run a figure suite");
  bench->add_option("suite", bench_suite, "s1 | s2 | s3")->required();
  bench->add_option("--seed", bench_seed);
  bench->add_option("--outdir", bench_outdir);
  bench->add_option("--k", bench_k, "iterations per cell (0 = suite default)");
  bench->add_option("--workers", bench_workers, "worker pool width (0 = cores)");

  // ---- fstar ----
  std::string fstar_outdir = "bench-out";
  std::uint64_t fstar_seed = 11;
  long long fstar_k = 100000;
  double fstar_s = 0.5;
  auto* fstar = app.add_subcommand("fstar", "produce the reference f* fixture");
  fstar->add_option("--outdir", fstar_outdir);
  fstar->add_option("--seed", fstar_seed);
  fstar->add_option("--k", fstar_k);
  fstar->add_option("--s", fstar_s);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return agm::run_config_text(read_file(cfg_path));

    if (monitor->parsed()) {
      auto cfg = agm::parse_run_config(read_file(mon_path));
      if (cfg.outputs.empty()) cfg.outputs.push_back({"/dev/stdout", true});
      for (auto& o : cfg.outputs) o.monitor = true;
      return agm::run_config(cfg);
    }

    if (check->parsed())
      return cmd_check(family, eta, nu, tau, alpha, beta, gamma, cc0, cc1, cc2, check_k_max);

    if (ode->parsed()) {
      const auto kind = agm::ode_kind_from_string(ode_kind);
      if (!kind) {
        std::cerr << "unknown ODE kind: " << ode_kind << "\n";
        return 1;
      }
      auto prob = agm::ProblemSpec::parse(ode_problem);
      if (prob.kind == "scalar-quadratic") prob.mu = o_mu;
      const agm::Objective obj = prob.build();
      const agm::Vector x0 = agm::Vector::Ones(obj.dim);
      const auto sys = agm::make_ode_system(*kind, obj, x0, o_c0, o_c1, o_r, o_bg, o_s);
      const auto trace = agm::integrate(sys, o_dt, o_tmax, o_stride);
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!ode_out.empty()) {
        file.open(ode_out, std::ios::binary);
        if (!file) {
          std::cerr << "cannot open " << ode_out << "\n";
          return 1;
        }
        out = &file;
      }
      *out << "t,f_gap,V,rate_check\n";
      for (const auto& smp : trace.samples) {
        *out << agm::format_g17(smp.t) << "," << agm::format_g17(smp.f_gap) << ","
             << agm::format_g17(smp.lyapunov_V) << "," << agm::format_g17(smp.rate_check)
             << "\n";
      }
      return 0;
    }

    if (convert->parsed()) {
      if (cv_to_single == cv_to_three) {
        std::cerr << "pick exactly one of --to-single / --to-three\n";
        return 1;
      }
      if (cv_to_single) {
        const agm::ScParams p{agm::parse_series(cv_eta), agm::parse_series(cv_nu),
                              agm::parse_series(cv_tau)};
        const auto series = agm::sc_coeff_series(p);
        std::cout << "[algo]\nid = single-var-sc\n";
        print_series("gd", series.gd);
        print_series("mom", series.mom);
        print_series("gc", series.gc);
        print_series("h1", series.h1);
        const auto at = agm::sc_three_to_single(p, cv_q);
        std::cout << "# at q = " << cv_q << ": gd=" << agm::format_g17(at.gd_coeff)
                  << " mom=" << agm::format_g17(at.mom_coeff)
                  << " gc=" << agm::format_g17(at.gc_coeff)
                  << " h1=" << agm::format_g17(at.h1) << "\n";
      } else {
        const auto conv = agm::single_to_sc_three(
            cv_c0, cv_c1, cv_gc0, agm::parse_series(cv_r1), agm::parse_series(cv_r2),
            agm::parse_series(cv_r3), agm::parse_series(cv_h1));
        std::cout << "[algo]\nid = extended-nag-sc\n";
        print_series("eta", conv.params.eta);
        print_series("nu", conv.params.nu);
        print_series("tau", conv.params.tau);
        print_series("h2", conv.h2);
      }
      return 0;
    }

    if (bench->parsed()) {
      agm::FigureSuite suite;
      if (bench_suite == "s1") suite.id = agm::FigureId::kS1;
      else if (bench_suite == "s2") suite.id = agm::FigureId::kS2;
      else if (bench_suite == "s3") suite.id = agm::FigureId::kS3;
      else {
        std::cerr << "unknown suite: " << bench_suite << "\n";
        return 1;
      }
      suite.seed = bench_seed;
      suite.k_max = bench_k;
      suite.workers = bench_workers;
      const auto cells = agm::run_figure(suite, bench_outdir);
      long long diverged = 0;
      for (const auto& c : cells) diverged += c.diverged ? 1 : 0;
      std::cout << cells.size() << " cells, " << diverged << " diverged, summary at "
                << bench_outdir << "/summary.csv\n";
      return 0;
    }

    if (fstar->parsed()) {
      std::filesystem::create_directories(fstar_outdir);
      const auto fx = agm::compute_reference_fstar(fstar_seed, fstar_k, fstar_s);
      const std::string path = fstar_outdir + "/fstar.txt";
      agm::save_fstar_fixture(fx, path);
      std::cout << "f_star = " << agm::format_g17(fx.f_star)
                << " grad_norm = " << agm::format_g17(fx.grad_norm)
                << (fx.low_confidence ? " (low confidence)" : "") << " -> " << path << "\n";
      return 0;
    }
  } catch (const agm::ConfigError& e) {
    std::cerr << "config error (line " << e.line_number << "): " << e.what() << "\n";
    return 1;
  } catch (const agm::DivergedError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
