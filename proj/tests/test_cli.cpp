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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agm/bench.hpp"
#include "agm/config.hpp"

using namespace agm;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("agm-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST(ConfigParse, CompactSemicolonForm) {
  const auto cfg =
      parse_run_config("problem = scalar-quadratic mu=1; algo = gd; s = 1; k = 10");
  EXPECT_EQ(cfg.problem.kind, "scalar-quadratic");
  EXPECT_EQ(cfg.algo.id, "gd");
  EXPECT_DOUBLE_EQ(cfg.s.value, 1.0);
  EXPECT_EQ(cfg.k_max, 10);
}

TEST(ConfigParse, SectionedForm) {
  const char* text = R"(# a small run
[problem]
kind = log-sum-exp
n = 50
m = 200
rho = 20
seed = 7

[algo]
id = nag-c
r = 2
beta = 1

[run]
s = 0.5
k = 3000
csv = out.csv
)";
  const auto cfg = parse_run_config(text);
  EXPECT_EQ(cfg.problem.kind, "log-sum-exp");
  EXPECT_EQ(cfg.problem.n, 50);
  EXPECT_EQ(cfg.problem.m, 200);
  EXPECT_EQ(cfg.algo.id, "nag-c");
  EXPECT_EQ(cfg.algo.get("beta", ""), "1");
  EXPECT_EQ(cfg.k_max, 3000);
  ASSERT_EQ(cfg.outputs.size(), 1u);
  EXPECT_EQ(cfg.outputs[0].csv_path, "out.csv");
  EXPECT_FALSE(cfg.outputs[0].monitor);
}

TEST(ConfigParse, BadKeyReportsLineNumber) {
  const char* text = "problem = scalar-quadratic mu=1\nalgo = gd\ns = 1\nwat = 9\n";
  try {
    parse_run_config(text);
    FAIL() << "expected config error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line_number, 4);
  }
}

TEST(ConfigParse, MissingPiecesRejected) {
  EXPECT_THROW(parse_run_config("algo = gd; s = 1"), ConfigError);
  EXPECT_THROW(parse_run_config("problem = scalar-quadratic mu=1; s = 1"), ConfigError);
  EXPECT_THROW(parse_run_config("problem = scalar-quadratic mu=1; algo = gd"), ConfigError);
}

TEST(ConfigParse, PrintParseRoundTripIsIdentity) {
  const char* text =
      "problem = diag-quadratic-2d d1=0.005 d2=1; algo = extended-nag-sc eta=1 nu=1 "
      "tau=1,0,0.5; s = 0.1/L; k = 250; x0 = 1,1; csv = a.csv; monitor = b.csv";
  const RunConfig cfg = parse_run_config(text);
  const std::string printed = cfg.print();
  const RunConfig again = parse_run_config(printed);
  EXPECT_EQ(printed, again.print());
}

TEST(StepSpec, ExpressionsResolve) {
  const Objective obj = make_diag_quadratic(5e-3, 1.0);  // L = 2
  ProblemSpec prob = ProblemSpec::parse("diag-quadratic-2d d1=0.005 d2=1");
  EXPECT_DOUBLE_EQ(StepSpec::parse("0.1/L").resolve(obj, prob), 0.05);
  EXPECT_DOUBLE_EQ(StepSpec::parse("1").resolve(obj, prob), 1.0);
  EXPECT_DOUBLE_EQ(StepSpec::parse("0.05/normA").resolve(obj, prob), 0.025);
  EXPECT_THROW(StepSpec::parse("0.1/what"), ConfigError);
  EXPECT_THROW(StepSpec::parse("abc"), ConfigError);

  // For log-sum-exp, |A| = sqrt(L * rho).
  const Objective lse = make_log_sum_exp(6, 12, 2.0, 3);
  ProblemSpec lse_spec = ProblemSpec::parse("log-sum-exp n=6 m=12 rho=2 seed=3");
  EXPECT_NEAR(StepSpec::parse("0.3/normA").resolve(lse, lse_spec),
              0.3 / std::sqrt(lse.L * 2.0), 1e-15);
}

TEST(SequenceParse, Grammar) {
  EXPECT_DOUBLE_EQ(parse_sequence("2.5")(7), 2.5);
  EXPECT_DOUBLE_EQ(parse_sequence("rational:2")(2), 2.0);
  EXPECT_DOUBLE_EQ(parse_sequence("fista")(0), 1.0);
  EXPECT_DOUBLE_EQ(parse_sequence("table:1,2,3")(5), 3.0);
  EXPECT_NO_THROW(parse_sequence("lemma5:4"));
  EXPECT_THROW(parse_sequence("lemma5:1"), ConfigError);
  EXPECT_THROW(parse_sequence("nonsense"), ConfigError);
}

TEST(RunConfigExec, MinimalConfigHitsZeroAtKOne) {
  TempDir tmp;
  const std::string csv = (tmp.path / "run.csv").string();
  const std::string text =
      "problem = scalar-quadratic mu=1; algo = gd; s = 1; k = 10; csv = " + csv;
  std::ostringstream err;
  EXPECT_EQ(run_config_text(text, err), 0) << err.str();
  const std::string got = slurp(csv);
  std::istringstream lines(got);
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  EXPECT_EQ(header, "k,f_gap,grad_norm_sq");
  EXPECT_EQ(row0, "0,0.5,1");
  EXPECT_EQ(row1, "1,0,0");
}

TEST(RunConfigExec, GoldenCsvSchema) {
  TempDir tmp;
  const std::string csv = (tmp.path / "golden.csv").string();
  const std::string text =
      "problem = scalar-quadratic mu=1; algo = gd; s = 0.25; k = 2; csv = " + csv;
  std::ostringstream err;
  ASSERT_EQ(run_config_text(text, err), 0) << err.str();
  EXPECT_EQ(slurp(csv),
            "k,f_gap,grad_norm_sq\n"
            "0,0.5,1\n"
            "1,0.28125,0.5625\n"
            "2,0.158203125,0.31640625\n");
}

TEST(RunConfigExec, ExitCodeTwoOnDivergence) {
  std::ostringstream err;
  EXPECT_EQ(run_config_text("problem = scalar-quadratic mu=1; algo = gd; s = 50; k = 100",
                            err),
            2);
  EXPECT_NE(err.str().find("diverged"), std::string::npos);
}

TEST(RunConfigExec, ExitCodeOneOnConfigError) {
  std::ostringstream err;
  EXPECT_EQ(run_config_text("problem = scalar-quadratic mu=1; algo = gd; s = 1; oops = 1",
                            err),
            1);
  EXPECT_EQ(run_config_text("problem = unknown; algo = gd; s = 1", err), 1);
}

TEST(RunConfigExec, EveryAlgoIdDispatches) {
  TempDir tmp;
  const std::string base = "problem = diag-quadratic-2d d1=0.005 d2=1; s = 0.1/L; k = 40; ";
  const char* algos[] = {
      "algo = gd",
      "algo = nag-sc",
      "algo = heavy-ball",
      "algo = tmm",
      "algo = extended-nag-sc eta=1.5 nu=1 tau=2",
      "algo = single-var-sc c0=1 c1=2 c2=1.5",
      "algo = nag-c r=2",
      "algo = extended-nag-c alpha=fista beta=0.8 gamma=1 form=three-var",
      "algo = hag a=0.05 b=1.7 phi=0.2",
      "algo = hag-sc c0=1 c1=2 c2=1.5 form=single-var",
      "algo = hag-c c0=1 c2=1.5 r=2",
  };
  int idx = 0;
  for (const char* algo : algos) {
    const std::string csv = (tmp.path / ("algo" + std::to_string(idx++) + ".csv")).string();
    std::ostringstream err;
    EXPECT_EQ(run_config_text(base + algo + "; csv = " + csv, err), 0)
        << algo << ": " << err.str();
    EXPECT_FALSE(slurp(csv).empty());
  }
}

TEST(RunConfigExec, MonitorEmitsLyapunovColumns) {
  TempDir tmp;
  const std::string csv = (tmp.path / "mon.csv").string();
  const std::string text =
      "problem = diag-quadratic-2d d1=0.005 d2=1; algo = nag-sc; s = 0.5/L; k = 50; "
      "monitor = " +
      csv;
  std::ostringstream err;
  ASSERT_EQ(run_config_text(text, err), 0) << err.str();
  std::istringstream lines(slurp(csv));
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "k,V,ratio,target_ratio,lemma_residual");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 50);
}

TEST(RunConfigExec, MonitorNagCNeedsFstarForLse) {
  TempDir tmp;
  const std::string csv = (tmp.path / "monc.csv").string();
  // On a quadratic, x*/f* are known and the C-family monitor works.
  const std::string text =
      "problem = random-quadratic n=10 seed=3; algo = nag-c r=2; s = 0.2/L; k = 60; "
      "monitor = " +
      csv;
  std::ostringstream err;
  ASSERT_EQ(run_config_text(text, err), 0) << err.str();
  EXPECT_NE(slurp(csv).find("k,V,ratio,target_ratio,lemma_residual"), std::string::npos);
}

TEST(FstarFixture, SaveLoadRoundTrip) {
  TempDir tmp;
  FstarFixture fx;
  fx.f_star = -12.345678901234567;
  fx.grad_norm = 3.25e-9;
  fx.k = 1000;
  fx.s = 0.5;
  fx.seed = 7;
  fx.low_confidence = false;
  fx.x_ref = Vector::LinSpaced(5, 0.0, 1.0);
  const std::string path = (tmp.path / "fstar.txt").string();
  save_fstar_fixture(fx, path);
  const FstarFixture back = load_fstar_fixture(path);
  EXPECT_EQ(back.f_star, fx.f_star);
  EXPECT_EQ(back.grad_norm, fx.grad_norm);
  EXPECT_EQ(back.k, fx.k);
  EXPECT_EQ(back.seed, fx.seed);
  EXPECT_EQ(back.low_confidence, fx.low_confidence);
  EXPECT_LE((back.x_ref - fx.x_ref).norm(), 0.0);
}

TEST(FstarFixture, DeterministicAcrossCalls) {
  const FstarFixture a = compute_reference_fstar(7, 2000, 0.5);
  const FstarFixture b = compute_reference_fstar(7, 2000, 0.5);
  EXPECT_EQ(a.f_star, b.f_star);  // bit identical
  EXPECT_EQ(a.grad_norm, b.grad_norm);
}

TEST(FigureSuite, S1SmokeRunWritesCellsAndSummary) {
  TempDir tmp;
  FigureSuite suite;
  suite.id = FigureId::kS1;
  suite.k_max = 50;
  suite.workers = 2;
  const auto cells = run_figure(suite, tmp.path.string());
  EXPECT_EQ(cells.size(), 36u);  // 2 problems x 2 c1 x 3 c2 x 3 s
  for (const auto& c : cells) {
    EXPECT_FALSE(c.diverged) << c.name;
    EXPECT_TRUE(fs::exists(tmp.path / (c.name + ".csv"))) << c.name;
  }
  const std::string summary = slurp(tmp.path / "summary.csv");
  EXPECT_NE(summary.find("iters_to_1e8"), std::string::npos);
  int rows = -1;  // exclude the header
  std::istringstream lines(summary);
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 36);
}
