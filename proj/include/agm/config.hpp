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

#ifndef AGM_CONFIG_HPP
#define AGM_CONFIG_HPP

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "agm/algorithms.hpp"
#include "agm/errors.hpp"
#include "agm/problems.hpp"
#include "agm/series.hpp"

namespace agm {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ConfigError("bad number: " + item);
    out.push_back(v);
  }
  return out;
}

// Comma-separated sqrt(q)-coefficient list, e.g. "1,0,0.5" = 1 + 0.5*q.
inline SqrtQSeries parse_series(const std::string& text) {
  return SqrtQSeries::from_coeffs(parse_double_list(text));
}

// Sequence grammar: a plain number (constant), "rational:r", "fista",
// "lemma5:r", or "table:v0,v1,...".
inline Sequence parse_sequence(const std::string& text) {
  if (text.rfind("rational:", 0) == 0) return Sequence::rational_alpha(std::stod(text.substr(9)));
  if (text == "fista") return Sequence::fista_alpha();
  if (text.rfind("lemma5:", 0) == 0) {
    const double r = std::stod(text.substr(7));
    if (r < 2.0) throw ConfigError("lemma5 sequence needs r >= 2");
    return Sequence::alternating_alpha(r);
  }
  if (text.rfind("table:", 0) == 0) {
    auto vals = parse_double_list(text.substr(6));
    if (vals.empty()) throw ConfigError("empty table sequence");
    return Sequence::table(vals, vals.back());
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return Sequence::constant(v);
  } catch (const std::exception&) {
  }
  throw ConfigError("bad sequence spec: " + text);
}

// Step size: a plain number or one of the idioms "x/L" and "x/normA".
struct StepSpec {
  double value = 0.0;
  std::string denom;  // "", "L", or "normA"

  double resolve(const Objective& obj, const ProblemSpec& prob) const {
    if (denom.empty()) return value;
    if (denom == "L") return value / obj.L;
    if (denom == "normA") {
      // |A| is the Hessian norm (= L) for quadratics; for log-sum-exp
      // L = |A|^2/rho, so |A| = sqrt(L*rho).
      if (prob.kind == "log-sum-exp") return value / std::sqrt(obj.L * prob.rho);
      return value / obj.L;
    }
    throw ConfigError("unknown step-size denominator: " + denom);
  }

  std::string print() const {
    std::ostringstream out;
    out.precision(17);
    out << value;
    if (!denom.empty()) out << "/" << denom;
    return out.str();
  }

  static StepSpec parse(const std::string& text) {
    StepSpec s;
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        s.value = std::stod(text);
        return s;
      }
      s.value = std::stod(text.substr(0, slash));
      s.denom = trim(text.substr(slash + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad step size: " + text);
    }
    if (s.denom != "L" && s.denom != "normA")
      throw ConfigError("step-size expressions support only x/L and x/normA");
    return s;
  }
};

struct AlgoSpec {
  std::string id = "gd";
  std::map<std::string, std::string> params;

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return params.count(key) > 0; }

  std::string print() const {
    std::string out = id;
    for (const auto& [k, v] : params) out += " " + k + "=" + v;
    return out;
  }

  static AlgoSpec parse(const std::string& text) {
    std::istringstream in(text);
    AlgoSpec spec;
    if (!(in >> spec.id)) throw ConfigError("empty algo spec");
    std::string token;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + token);
      spec.params[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return spec;
  }
};

struct OutputSpec {
  std::string csv_path;
  bool monitor = false;
};

// A full run description. The canonical printed form parses back to an
// identical config.
struct RunConfig {
  ProblemSpec problem;
  AlgoSpec algo;
  StepSpec s;
  long long k_max = 100;
  std::vector<OutputSpec> outputs;
  std::optional<double> fstar_override;
  std::vector<double> x0;  // empty = all-ones start

  std::string print() const {
    std::ostringstream out;
    out.precision(17);
    out << "problem = " << problem.print() << "\n";
    out << "algo = " << algo.print() << "\n";
    out << "s = " << s.print() << "\n";
    out << "k = " << k_max << "\n";
    if (!x0.empty()) {
      out << "x0 = ";
      for (std::size_t i = 0; i < x0.size(); ++i) out << (i ? "," : "") << format_g17(x0[i]);
      out << "\n";
    }
    if (fstar_override) out << "fstar = " << format_g17(*fstar_override) << "\n";
    for (const auto& o : outputs) {
      out << (o.monitor ? "monitor = " : "csv = ") << o.csv_path << "\n";
    }
    return out.str();
  }
};

// Line-oriented `key = value` grammar with optional [problem]/[algo]/[run]
// sections, `#` comments, and `;` accepted as a line separator.
inline RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  bool have_problem = false, have_algo = false, have_s = false;
  std::string section;
  std::map<std::string, std::string> problem_kv, algo_kv;
  std::string problem_kind, algo_id;

  int line_no = 0;
  std::istringstream lines(text);
  std::string physical;
  while (std::getline(lines, physical)) {
    ++line_no;
    const auto hash = physical.find('#');
    if (hash != std::string::npos) physical.erase(hash);
    std::istringstream parts(physical);
    std::string entry;
    while (std::getline(parts, entry, ';')) {
      entry = trim(entry);
      if (entry.empty()) continue;
      if (entry.front() == '[') {
        if (entry.back() != ']') throw ConfigError("unterminated section header", line_no);
        section = trim(entry.substr(1, entry.size() - 2));
        if (section != "problem" && section != "algo" && section != "run")
          throw ConfigError("unknown section [" + section + "]", line_no);
        continue;
      }
      const auto eq = entry.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key = value: " + entry, line_no);
      const std::string key = trim(entry.substr(0, eq));
      const std::string value = trim(entry.substr(eq + 1));
      try {
        if (key == "problem") {
          cfg.problem = ProblemSpec::parse(value);
          have_problem = true;
        } else if (key == "algo") {
          cfg.algo = AlgoSpec::parse(value);
          have_algo = true;
        } else if (section == "problem") {
          if (key == "kind") problem_kind = value;
          else problem_kv[key] = value;
        } else if (section == "algo") {
          if (key == "id") algo_id = value;
          else algo_kv[key] = value;
        } else if (key == "s") {
          cfg.s = StepSpec::parse(value);
          have_s = true;
        } else if (key == "k" || key == "k_max") {
          cfg.k_max = std::stoll(value);
        } else if (key == "csv" || key == "out") {
          cfg.outputs.push_back({value, false});
        } else if (key == "monitor") {
          cfg.outputs.push_back({value, true});
        } else if (key == "fstar") {
          cfg.fstar_override = std::stod(value);
        } else if (key == "x0") {
          cfg.x0 = parse_double_list(value);
        } else {
          throw ConfigError("unknown key: " + key, line_no);
        }
      } catch (ConfigError& e) {
        if (e.line_number == 0) throw ConfigError(e.what(), line_no);
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(std::string(e.what()) + " in: " + entry, line_no);
      }
    }
  }

  if (!problem_kind.empty() || !problem_kv.empty()) {
    std::string assembled = problem_kind;
    for (const auto& [k, v] : problem_kv) assembled += " " + k + "=" + v;
    cfg.problem = ProblemSpec::parse(assembled);
    have_problem = true;
  }
  if (!algo_id.empty() || !algo_kv.empty()) {
    std::string assembled = algo_id;
    for (const auto& [k, v] : algo_kv) assembled += " " + k + "=" + v;
    cfg.algo = AlgoSpec::parse(assembled);
    have_algo = true;
  }
  if (!have_problem) throw ConfigError("config lacks a problem");
  if (!have_algo) throw ConfigError("config lacks an algo");
  if (!have_s) throw ConfigError("config lacks a step size s");
  return cfg;
}

}  // namespace agm

#endif  // AGM_CONFIG_HPP
