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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rba/cli.h"
#include "rba/errors.h"
#include "rba/harness.h"
#include "rba/regret.h"
#include "rba/scenario.h"

using namespace rba;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = RBA_SCENARIO_DIR;
const std::vector<std::uint64_t> kSeeds = {1, 2, 3, 4, 5};
constexpr int kHorizon = 10000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Loaded {
  Scenario scenario;
  ApproachProblem problem;
};

Loaded Load(const std::string& file) {
  Scenario s = load_scenario(kScenarioDir + "/" + file);
  ApproachProblem p = build_problem(s.problem);
  return {std::move(s), std::move(p)};
}

std::vector<OpponentStrategy> Opponents(const ApproachProblem& problem) {
  const int nz = problem.game.n_opp();
  OpponentStrategy fixed{OpponentStrategy::Kind::kFixedMixed, {}, {}};
  fixed.q.assign(nz, 1.0 / nz);
  fixed.q[0] += 0.5 / nz;
  fixed.q[nz - 1] -= 0.5 / nz;
  OpponentStrategy periodic{OpponentStrategy::Kind::kPeriodicPure, {}, {}};
  for (int z = 0; z < nz; ++z) periodic.sequence.push_back(z);
  periodic.sequence.push_back(0);
  OpponentStrategy adversary{OpponentStrategy::Kind::kAdversarialOmniscient, {}, {}};
  return {fixed, periodic, adversary};
}

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// Runs and feeds every step to check; a failed run is reported in the outcome.
void RunChecked(const ApproachProblem& problem, const RunConfig& config, std::uint64_t seed,
                Outcome& out, const std::function<void(const StepRecord&)>& check) {
  try {
    const RunReport r = run(problem, config, seed, check);
    if (r.failure != FailureKind::kNone && r.failure != FailureKind::kAudit &&
        r.failure != FailureKind::kBound) {
      out.pass = false;
      out.detail = config.scenario_id + " seed " + std::to_string(seed) + ": " +
                   r.failure_message;
    }
  } catch (const Error& e) {
    out.pass = false;
    out.detail = config.scenario_id + " seed " + std::to_string(seed) + ": " + e.what();
  }
}

RunConfig Config(const Loaded& l, Algorithm alg, const OpponentStrategy& opp, int steps) {
  return RunConfig{l.scenario.id, alg, opp, steps};
}

// -- 1 ------------------------------------------------------------------------

double GridMaximin(const ScalarMatrix& m, int steps) {
  double best = -INFINITY;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double p[3] = {double(i) / steps, double(j) / steps, double(steps - i - j) / steps};
      double worst = INFINITY;
      for (int z = 0; z < 3; ++z) worst = std::min(worst, p[0] * m(0, z) + p[1] * m(1, z) + p[2] * m(2, z));
      best = std::max(best, worst);
    }
  }
  return best;
}

Outcome SaddleCertificate() {
  Outcome out;
  std::mt19937_64 gen(2026);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int games = 0;
  double worst_grid = 0.0;
  for (int size : {2, 3, 5, 20}) {
    for (int t = 0; t < 100; ++t) {
      ScalarMatrix m(size, size);
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) m(i, j) = u(gen);
      const SaddlePoint sp = solve_zero_sum(m);
      ++games;
      if (!check_saddle_certificate(m, sp, 1e-8)) {
        out.pass = false;
        out.detail = "certificate gap above 1e-8 on a " + std::to_string(size) + "x" +
                     std::to_string(size) + " game";
      }
      if (size == 3) {
        worst_grid = std::max(worst_grid, std::abs(sp.value - GridMaximin(m, 199)));
      }
    }
  }
  if (worst_grid > 2e-2) out.pass = false;
  if (out.detail.empty()) {
    out.detail = std::to_string(games) + " games, max 3x3 grid gap " + Num(worst_grid);
  }
  return out;
}

// -- 2 and 3 ------------------------------------------------------------------

struct RateAudit {
  Outcome rate, audit;
};

RateAudit RateAndAudit() {
  RateAudit out;
  const std::vector<std::string> files = {
      "generic_a.yaml",   "generic_b.yaml",   "external.yaml",      "internal.yaml",
      "blackwell.yaml",   "global_abs.yaml",  "global_infnorm.yaml", "global_dnorm.yaml",
      "ratio.yaml",       "constrained.yaml"};
  double max_ratio = 0.0, max_descent = -INFINITY;
  long steps = 0, audited = 0;
  int runs = 0;
  for (const auto& f : files) {
    const Loaded l = Load(f);
    const double rho = l.problem.game.rho();
    for (const auto& opp : Opponents(l.problem)) {
      for (std::uint64_t seed : kSeeds) {
        ++runs;
        RunChecked(l.problem, Config(l, Algorithm::kResponseBased, opp, kHorizon), seed,
                   out.rate, [&](const StepRecord& s) {
                     ++steps;
                     const double b = rho / std::sqrt(s.n);
                     max_ratio = std::max(max_ratio, s.lambda_norm / b);
                     bool ok = s.lambda_norm <= b + 1e-7;
                     if (s.dist_to_S) ok = ok && *s.dist_to_S <= s.lambda_norm + 1e-7;
                     if (!ok && out.rate.pass) {
                       out.rate.pass = false;
                       out.rate.detail = l.scenario.id + " seed " + std::to_string(seed) +
                                         " step " + std::to_string(s.n);
                     }
                     if (s.recursion_audit_pass && s.descent <= 1e-8) ++audited;
                     max_descent = std::max(max_descent, s.descent);
                   });
      }
    }
  }
  if (out.rate.pass) {
    out.rate.detail = std::to_string(runs) + " runs, " + std::to_string(steps) +
                      " steps, max |lambda| sqrt(n)/rho " + Num(max_ratio);
  }
  out.audit.pass = out.rate.pass && audited == steps && steps == long(runs) * kHorizon;
  out.audit.detail = std::to_string(audited) + "/" + std::to_string(steps) +
                     " steps audited, max descent term " + Num(max_descent);
  return out;
}

// -- 4 ------------------------------------------------------------------------

Outcome Idling() {
  Outcome out;
  const Loaded l = Load("external.yaml");
  const double rho = l.problem.game.rho();
  double max_ratio = 0.0;
  for (const auto& opp : Opponents(l.problem)) {
    for (std::uint64_t seed : kSeeds) {
      RunChecked(l.problem, Config(l, Algorithm::kIdling, opp, kHorizon), seed, out,
                 [&](const StepRecord& s) {
                   const double b = rho / std::sqrt(s.n);
                   max_ratio = std::max(max_ratio, *s.dist_to_S / b);
                   if (*s.dist_to_S > b + 1e-7 && out.pass) {
                     out.pass = false;
                     out.detail = "seed " + std::to_string(seed) + " step " + std::to_string(s.n);
                   }
                 });
    }
  }
  if (out.pass) out.detail = "max d(r_bar, S) sqrt(n)/rho " + Num(max_ratio);
  return out;
}

// -- 5 ------------------------------------------------------------------------

Outcome HighProbability() {
  Outcome out;
  const Loaded l = Load("external.yaml");
  RunConfig cfg = Config(l, Algorithm::kRealized, l.scenario.opponent, 2000);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 200; ++s) seeds.push_back(1000 + s);
  const SweepResult res = sweep(l.problem, cfg, seeds, SweepConfig{{2000}, 0.1});
  for (const auto& r : res.reports) {
    if (!r.ok()) {
      out.pass = false;
      out.detail = "seed " + std::to_string(r.seed) + ": " + r.failure_message;
      return out;
    }
  }
  const SweepRow& row = res.rows.at(0);
  out.pass = row.violation_fraction <= 0.1;
  out.detail = "violation fraction " + Num(row.violation_fraction) + ", q95 " +
               Num(row.quantile_95) + " vs bound " + Num(row.bound);
  return out;
}

// -- 6 ------------------------------------------------------------------------

Outcome NoRegret() {
  Outcome out;
  double worst_ext = 0.0, worst_int = 0.0;
  for (const char* file : {"external.yaml", "internal.yaml"}) {
    const bool internal = std::string(file) == "internal.yaml";
    const Loaded l = Load(file);
    const ScalarMatrix& u = *l.problem.utility;
    const int na = u.rows();
    const double rho = l.problem.game.rho();
    for (const auto& opp : Opponents(l.problem)) {
      for (std::uint64_t seed : kSeeds) {
        std::vector<double> ext(na, 0.0);
        std::vector<double> in(static_cast<std::size_t>(na) * na, 0.0);
        RunChecked(l.problem, Config(l, Algorithm::kResponseBased, opp, kHorizon), seed, out,
                   [&](const StepRecord& s) {
                     double got = 0.0;
                     for (int a = 0; a < na; ++a) got += s.p[a] * u(a, s.z);
                     double worst = -INFINITY;
                     for (int a = 0; a < na; ++a) {
                       if (internal) {
                         for (int b = 0; b < na; ++b) {
                           in[a * na + b] += s.p[a] * (u(b, s.z) - u(a, s.z));
                           worst = std::max(worst, in[a * na + b] / s.n);
                         }
                       } else {
                         ext[a] += u(a, s.z) - got;
                         worst = std::max(worst, ext[a] / s.n);
                       }
                     }
                     const double b = rho / std::sqrt(s.n);
                     double& tracked = internal ? worst_int : worst_ext;
                     tracked = std::max(tracked, worst / b);
                     if (worst > b + 1e-7 && out.pass) {
                       out.pass = false;
                       out.detail = std::string(file) + " seed " + std::to_string(seed) +
                                    " step " + std::to_string(s.n);
                     }
                   });
      }
    }
  }
  if (out.pass) {
    out.detail = "max regret sqrt(n)/rho: external " + Num(worst_ext) + ", internal " +
                 Num(worst_int);
  }
  return out;
}

// -- 7 ------------------------------------------------------------------------

Outcome RatioAtPure() {
  Outcome out;
  const Loaded l = Load("ratio.yaml");
  const ScalarMatrix u = ScalarMatrix::FromRows(l.scenario.problem.utility);
  Matrix c_rows;
  for (const auto& row : l.scenario.problem.cost) {
    c_rows.emplace_back();
    for (const auto& cell : row) c_rows.back().push_back(cell.at(0));
  }
  const ScalarMatrix c = ScalarMatrix::FromRows(c_rows);
  double worst = INFINITY;
  for (int z = 0; z < u.cols(); ++z) {
    const OpponentStrategy opp{OpponentStrategy::Kind::kPeriodicPure, {}, {z}};
    double ratio = 0.0;
    RunChecked(l.problem, Config(l, Algorithm::kResponseBased, opp, kHorizon), 1, out,
               [&](const StepRecord& s) { ratio = s.r_bar[0] / s.r_bar[1]; });
    const double target = rho_star(u, c, MixedAction::Pure(u.cols(), z));
    worst = std::min(worst, ratio - target);
    if (ratio < target - 0.02) {
      out.pass = false;
      out.detail = "z=" + std::to_string(z) + ": ratio " + Num(ratio) + " vs " + Num(target);
    }
  }
  if (out.pass) out.detail = "min over z of U/C - rho*(z) " + Num(worst);
  return out;
}

// -- 8 ------------------------------------------------------------------------

Outcome Constrained() {
  Outcome out;
  const Loaded l = Load("constrained.yaml");
  const TargetSet gamma = build_set(*l.scenario.problem.constraint);
  const double rho = l.problem.game.rho();
  const int s_dim = gamma.dim();
  double max_ratio = 0.0;
  for (const auto& opp : Opponents(l.problem)) {
    for (std::uint64_t seed : kSeeds) {
      RunChecked(l.problem, Config(l, Algorithm::kResponseBased, opp, kHorizon), seed, out,
                 [&](const StepRecord& s) {
                   const double b = rho / std::sqrt(s.n);
                   const std::vector<double> c_bar(s.r_bar.begin() + 1,
                                                   s.r_bar.begin() + 1 + s_dim);
                   const double d = distance(gamma, c_bar);
                   const double shortfall = s.r_star_bar[0] - s.r_bar[0];
                   max_ratio = std::max({max_ratio, d / b, shortfall / b});
                   if ((d > b + 1e-7 || shortfall > b + 1e-7) && out.pass) {
                     out.pass = false;
                     out.detail = "seed " + std::to_string(seed) + " step " + std::to_string(s.n);
                   }
                 });
    }
  }
  if (out.pass) out.detail = "max violation sqrt(n)/rho " + Num(max_ratio);
  return out;
}

// -- 9 ------------------------------------------------------------------------

Outcome Ogd() {
  Outcome out;
  double max_ratio = 0.0;
  for (const char* file : {"ogd_ball.yaml", "ogd_singleton.yaml"}) {
    const Loaded l = Load(file);
    const double rho = l.problem.game.rho();
    for (const auto& opp : Opponents(l.problem)) {
      for (std::uint64_t seed : kSeeds) {
        RunChecked(l.problem, Config(l, Algorithm::kOgd, opp, kHorizon), seed, out,
                   [&](const StepRecord& s) {
                     if (s.n != 1000 && s.n != 10000) return;
                     const double b = 5.0 * rho / std::sqrt(s.n);
                     max_ratio = std::max(max_ratio, *s.dist_to_S / b);
                     if (*s.dist_to_S > b && out.pass) {
                       out.pass = false;
                       out.detail = std::string(file) + " seed " + std::to_string(seed) +
                                    " n=" + std::to_string(s.n) + ": distance " +
                                    Num(*s.dist_to_S) + " vs " + Num(b);
                     }
                   });
      }
    }
  }
  if (out.pass) out.detail = "max d(r_bar, S) / (5 rho/sqrt(n)) " + Num(max_ratio);
  return out;
}

// -- 10 -----------------------------------------------------------------------

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / ("rba_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ostringstream sink;
  int files = 0;
  for (const char* file : {"external.yaml", "generic_a.yaml", "constrained.yaml"}) {
    const std::string path = kScenarioDir + "/" + file;
    const fs::path a = dir / "a.csv", b = dir / "b.csv";
    const int ca = cmd_run(path, 5, a.string(), sink, sink);
    const int cb = cmd_run(path, 5, b.string(), sink, sink);
    ++files;
    if (ca != 0 || cb != 0 || Slurp(a) != Slurp(b) || Slurp(a).empty()) {
      out.pass = false;
      out.detail = std::string("run differs for ") + file;
    }
  }
  const std::string sweep_path = kScenarioDir + "/external_realized.yaml";
  const fs::path sa = dir / "sa.csv", sb = dir / "sb.csv";
  const int ca = cmd_sweep(sweep_path, sa.string(), sink, sink);
  const int cb = cmd_sweep(sweep_path, sb.string(), sink, sink);
  if (ca != 0 || cb != 0 || Slurp(sa) != Slurp(sb) || Slurp(sa).empty()) {
    out.pass = false;
    out.detail = "sweep differs";
  }
  fs::remove_all(dir);
  if (out.pass) out.detail = std::to_string(files) + " run pairs and 1 sweep pair identical";
  return out;
}

// -- 11 -----------------------------------------------------------------------

Outcome SecurityLevel() {
  Outcome out;
  const Loaded l = Load("global_abs_2x2.yaml");
  const ScalarMatrix v = ScalarMatrix::FromRows(l.scenario.problem.values);
  const VectorGame scalar = VectorGame::FromScalar(v);
  const GlobalCostSpec g{GlobalCost::kAbsoluteValue, 2.0};
  constexpr int kGrid = 101;
  std::vector<double> xs(kGrid), star(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[i] = double(i) / (kGrid - 1);
    star[i] = global_cost_star(g, scalar, MixedAction({xs[i], 1.0 - xs[i]}));
  }
  const auto conc = upper_concave_envelope(xs, star);
  double minmax = INFINITY;
  for (int i = 0; i < kGrid; ++i) {
    const MixedAction p({xs[i], 1.0 - xs[i]});
    double worst = -INFINITY;
    for (int j = 0; j < kGrid; ++j) {
      const MixedAction q({xs[j], 1.0 - xs[j]});
      worst = std::max(worst, global_cost_value(g, expected_reward(scalar, p, q)));
    }
    minmax = std::min(minmax, worst);
  }
  double top = -INFINITY;
  for (int i = 0; i < kGrid; ++i) {
    top = std::max(top, conc[i]);
    if (conc[i] > minmax + 1e-2) out.pass = false;
  }
  out.detail = "max conc(G*) " + Num(top) + ", min-max " + Num(minmax);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  RateAudit rate_audit;
  bool rate_done = false;
  auto rate = [&]() -> RateAudit& {
    if (!rate_done) rate_audit = RateAndAudit();
    rate_done = true;
    return rate_audit;
  };
  const std::vector<Criterion> criteria = {
      {"saddle certificate", SaddleCertificate},
      {"rate bound for every kind and opponent", [&] { return rate().rate; }},
      {"recursion audit", [&] { return rate().audit; }},
      {"idling distance bound", Idling},
      {"realized high-probability bound", HighProbability},
      {"external and internal regret", NoRegret},
      {"ratio at pure opponents", RatioAtPure},
      {"constrained regret", Constrained},
      {"ogd on compact targets", Ogd},
      {"determinism", Determinism},
      {"security level", SecurityLevel},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
