// Copyright 2026 The rba Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rba/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "rba/errors.h"
#include "rba/scenario.h"

namespace rba {
namespace {

std::string Optional(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool ParseDouble(const std::string& s, double& x) {
  if (s == "inf") {
    x = INFINITY;
    return true;
  }
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const CertificationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

struct RunGroup {
  std::string scenario_id;
  std::string seed;
  int steps = 0;
  bool audits = true;
  bool has_ratio = false;
  double max_ratio = 0.0;
  std::string final_dist;
};

}  // namespace

int exit_code_for(FailureKind k) {
  switch (k) {
    case FailureKind::kNone: return kExitOk;
    case FailureKind::kAudit:
    case FailureKind::kBound:
    case FailureKind::kCertification: return kExitViolation;
    case FailureKind::kSolver: return kExitSolver;
    case FailureKind::kValidation: return kExitValidation;
  }
  return kExitViolation;
}

std::string step_csv_header() {
  return "schema_version,scenario_id,seed,n,a_n,z_n,lambda_norm,dist_to_S,game_value,"
         "recursion_audit_pass,bound_ratio";
}

std::string step_csv_row(const std::string& scenario_id, std::uint64_t seed,
                         const StepRecord& r) {
  std::string s = std::to_string(kSchemaVersion);
  s += "," + scenario_id + "," + std::to_string(seed) + "," + std::to_string(r.n) + "," +
       std::to_string(r.a) + "," + std::to_string(r.z) + "," + format_double(r.lambda_norm) +
       "," + Optional(r.dist_to_S) + "," + Optional(r.game_value) + "," +
       (r.recursion_audit_pass ? "true" : "false") + "," + Optional(r.bound_ratio);
  return s;
}

std::string sweep_csv_header() {
  return "schema_version,scenario_id,n_checkpoint,quantile_50,quantile_95,max,theorem3_bound,"
         "violation_fraction";
}

std::string sweep_csv_row(const std::string& scenario_id, const SweepRow& r) {
  return std::to_string(kSchemaVersion) + "," + scenario_id + "," +
         std::to_string(r.n_checkpoint) + "," + format_double(r.quantile_50) + "," +
         format_double(r.quantile_95) + "," + format_double(r.max) + "," +
         format_double(r.bound) + "," + format_double(r.violation_fraction);
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&]() {
    const Scenario sc = load_scenario(scenario_path);
    const std::string path = out_path.empty() ? sc.output_csv : out_path;
    if (path.empty()) {
      throw ValidationError(scenario_path + ": no output path (pass --out or set output.csv)");
    }
    const std::uint64_t s = seed ? *seed : (sc.seeds.empty() ? 0 : sc.seeds.front());
    const ApproachProblem problem = build_problem(sc.problem);
    const RunConfig config = build_config(sc);

    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw ValidationError(path + ": cannot open for writing");
    csv << step_csv_header() << "\n";
    const RunReport report = run(problem, config, s, [&](const StepRecord& r) {
      csv << step_csv_row(sc.id, s, r) << "\n";
    });
    csv.close();

    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario_id"] = report.scenario_id;
    j["seed"] = report.seed;
    j["algorithm"] = report.algorithm;
    j["n_steps"] = report.n_steps;
    j["max_bound_ratio"] = report.max_bound_ratio;
    j["final_dist_to_S"] = report.final_dist ? nlohmann::json(*report.final_dist) : nlohmann::json(nullptr);
    j["final_lambda_norm"] = report.final_lambda_norm;
    j["certified"] = report.certified;
    j["audits_passed"] = report.audits_passed;
    j["bounds_passed"] = report.bounds_passed;
    j["failure"] = failure_kind_name(report.failure);
    j["failure_step"] = report.failure_step;
    j["failure_message"] = report.failure_message;
    std::ofstream summary(path + ".summary.json", std::ios::binary);
    summary << j.dump(2) << "\n";

    out << sc.id << " seed=" << s << " steps=" << report.n_steps
        << " max_ratio=" << format_double(report.max_bound_ratio)
        << " wall=" << report.wall_seconds << "s\n";
    if (!report.ok()) {
      err << "error: " << failure_kind_name(report.failure) << " failure at step "
          << report.failure_step << ": " << report.failure_message << "\n";
    }
    return exit_code_for(report.failure);
  });
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  return Guarded(err, [&]() {
    const Scenario sc = load_scenario(scenario_path);
    const std::string path = out_path.empty() ? sc.output_sweep_csv : out_path;
    if (path.empty()) {
      throw ValidationError(scenario_path +
                            ": no output path (pass --out or set output.sweep_csv)");
    }
    if (sc.seeds.empty()) throw ValidationError(scenario_path + ": sweep needs at least one seed");
    const ApproachProblem problem = build_problem(sc.problem);
    const RunConfig config = build_config(sc);
    const SweepResult res = sweep(problem, config, sc.seeds, sc.sweep.value_or(SweepConfig{}));

    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw ValidationError(path + ": cannot open for writing");
    csv << sweep_csv_header() << "\n";
    for (const auto& row : res.rows) csv << sweep_csv_row(sc.id, row) << "\n";

    int code = kExitOk;
    for (const auto& r : res.reports) {
      if (!r.ok()) {
        err << "error: seed " << r.seed << ": " << failure_kind_name(r.failure)
            << " failure at step " << r.failure_step << ": " << r.failure_message << "\n";
        if (code == kExitOk) code = exit_code_for(r.failure);
      }
    }
    for (const auto& row : res.rows) {
      out << sc.id << " n=" << row.n_checkpoint << " q50=" << format_double(row.quantile_50)
          << " q95=" << format_double(row.quantile_95) << " bound=" << format_double(row.bound)
          << " violation_fraction=" << format_double(row.violation_fraction) << "\n";
    }
    return code;
  });
}

int cmd_report(const std::vector<std::string>& csv_paths, std::ostream& out, std::ostream& err) {
  if (csv_paths.empty()) {
    err << "usage: rba report <run.csv>...\n";
    return kExitValidation;
  }
  std::vector<RunGroup> groups;
  for (const auto& path : csv_paths) {
    std::ifstream in(path);
    if (!in) {
      err << "error: " << path << ": cannot open\n";
      return kExitValidation;
    }
    std::string line;
    if (!std::getline(in, line) || line != step_csv_header()) {
      err << "error: " << path << ":1: missing or unexpected header\n";
      return kExitValidation;
    }
    std::map<std::string, std::size_t> index;
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = SplitCsv(line);
      auto bad = [&](const std::string& why) {
        err << "error: " << path << ":" << lineno << ": " << why << "\n";
        return kExitValidation;
      };
      if (f.size() != 11) return bad("expected 11 fields, found " + std::to_string(f.size()));
      if (f[0] != std::to_string(kSchemaVersion)) return bad("unsupported schema version " + f[0]);
      double x = 0.0;
      if (!ParseDouble(f[6], x)) return bad("lambda_norm is not a number");
      if (!f[7].empty() && !ParseDouble(f[7], x)) return bad("dist_to_S is not a number");
      if (!f[8].empty() && !ParseDouble(f[8], x)) return bad("game_value is not a number");
      if (f[9] != "true" && f[9] != "false") return bad("recursion_audit_pass is not a boolean");
      double ratio = 0.0;
      if (!f[10].empty() && !ParseDouble(f[10], ratio)) return bad("bound_ratio is not a number");
      const std::string key = f[1] + "\x1f" + f[2];
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, groups.size()).first;
        RunGroup g;
        g.scenario_id = f[1];
        g.seed = f[2];
        groups.push_back(g);
      }
      RunGroup& g = groups[it->second];
      ++g.steps;
      g.audits = g.audits && f[9] == "true";
      if (!f[10].empty()) {
        g.has_ratio = true;
        g.max_ratio = std::max(g.max_ratio, ratio);
      }
      g.final_dist = f[7];
    }
  }
  bool all_pass = true;
  for (const auto& g : groups) {
    out << g.scenario_id << " seed=" << g.seed << " steps=" << g.steps;
    if (g.has_ratio) out << " max_ratio=" << format_double(g.max_ratio);
    out << " final_dist=" << (g.final_dist.empty() ? "n/a" : g.final_dist) << "\n";
    out << (g.audits ? "PASS" : "FAIL") << " recursion-audit " << g.scenario_id << " seed=" << g.seed
        << "\n";
    all_pass = all_pass && g.audits;
    if (g.has_ratio) {
      const bool ok = g.max_ratio <= 1.0 + kBoundTol;
      out << (ok ? "PASS" : "FAIL") << " rate-bound " << g.scenario_id << " seed=" << g.seed
          << " max_ratio=" << format_double(g.max_ratio) << "\n";
      all_pass = all_pass && ok;
    }
  }
  return all_pass ? kExitOk : kExitFail;
}

int cmd_echo(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&]() {
    out << emit_scenario(load_scenario(scenario_path));
    return kExitOk;
  });
}

}  // namespace rba
