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

#include "rba/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <thread>

#include "rba/errors.h"

namespace rba {
namespace {

Variant VariantOf(Algorithm a) {
  switch (a) {
    case Algorithm::kIdling: return Variant::kIdling;
    case Algorithm::kUnbounded: return Variant::kUnbounded;
    case Algorithm::kRealized: return Variant::kRealized;
    default: return Variant::kSmoothed;
  }
}

bool ResponseBased(Algorithm a) { return a != Algorithm::kPrimal && a != Algorithm::kOgd; }

MixedAction RandomMixed(int n, Rng& rng) {
  std::vector<double> w(n);
  for (double& x : w) x = -std::log1p(-rng.Uniform()) + 1e-300;
  return MixedAction::Normalized(std::move(w));
}

void Average(std::vector<double>& bar, std::span<const double> x, int n) {
  for (std::size_t k = 0; k < bar.size(); ++k) bar[k] += (x[k] - bar[k]) / n;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kResponseBased: return "response-based";
    case Algorithm::kIdling: return "response-based+idling";
    case Algorithm::kUnbounded: return "response-based+unbounded";
    case Algorithm::kRealized: return "response-based-realized";
    case Algorithm::kPrimal: return "primal-blackwell";
    case Algorithm::kOgd: return "ogd-support";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kResponseBased, Algorithm::kIdling, Algorithm::kUnbounded,
                      Algorithm::kRealized, Algorithm::kPrimal, Algorithm::kOgd}) {
    if (algorithm_name(a) == name) return a;
  }
  throw ValidationError("unknown algorithm '" + name + "'");
}

bool certified_algorithm(Algorithm a) {
  return a == Algorithm::kResponseBased || a == Algorithm::kIdling || a == Algorithm::kUnbounded;
}

std::string opponent_kind_name(OpponentStrategy::Kind k) {
  switch (k) {
    case OpponentStrategy::Kind::kFixedMixed: return "fixed-mixed";
    case OpponentStrategy::Kind::kPeriodicPure: return "periodic-pure";
    case OpponentStrategy::Kind::kAdversarialOmniscient: return "adversarial";
    case OpponentStrategy::Kind::kBestResponseToEmpirical: return "best-response-empirical";
  }
  return "unknown";
}

OpponentStrategy::Kind parse_opponent_kind(const std::string& name) {
  using K = OpponentStrategy::Kind;
  for (K k : {K::kFixedMixed, K::kPeriodicPure, K::kAdversarialOmniscient,
              K::kBestResponseToEmpirical}) {
    if (opponent_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown opponent kind '" + name + "'");
}

std::string failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::kNone: return "none";
    case FailureKind::kAudit: return "audit";
    case FailureKind::kBound: return "bound";
    case FailureKind::kCertification: return "certification";
    case FailureKind::kSolver: return "solver";
    case FailureKind::kValidation: return "validation";
  }
  return "unknown";
}

void validate_opponent(const OpponentStrategy& s, const ApproachProblem& problem) {
  const int nz = problem.game.n_opp();
  switch (s.kind) {
    case OpponentStrategy::Kind::kFixedMixed:
      if (static_cast<int>(s.q.size()) != nz) {
        throw ValidationError("fixed-mixed opponent q has " + std::to_string(s.q.size()) +
                              " entries, the game has " + std::to_string(nz) +
                              " opponent actions");
      }
      MixedAction{s.q};
      break;
    case OpponentStrategy::Kind::kPeriodicPure:
      if (s.sequence.empty()) throw ValidationError("periodic-pure opponent needs a sequence");
      for (int z : s.sequence) {
        if (z < 0 || z >= nz) {
          throw ValidationError("periodic-pure opponent action " + std::to_string(z) +
                                " out of range");
        }
      }
      break;
    case OpponentStrategy::Kind::kAdversarialOmniscient:
      break;
    case OpponentStrategy::Kind::kBestResponseToEmpirical:
      if (!problem.utility) {
        throw ValidationError("best-response-empirical opponent needs a scalar-utility problem");
      }
      break;
  }
}

int opponent_act(const OpponentStrategy& s, const ApproachProblem& problem,
                 const OpponentView& view, Rng& rng) {
  const VectorGame& game = problem.game;
  switch (s.kind) {
    case OpponentStrategy::Kind::kFixedMixed:
      return sample_action(MixedAction(s.q), rng);
    case OpponentStrategy::Kind::kPeriodicPure:
      return s.sequence[(view.n - 1) % s.sequence.size()];
    case OpponentStrategy::Kind::kAdversarialOmniscient: {
      int best = 0;
      double best_value = INFINITY;
      for (int z = 0; z < game.n_opp(); ++z) {
        const double v =
            view.direction.empty() ? 0.0 : dot(view.direction, reward_against(game, *view.p, z));
        if (v < best_value) {
          best_value = v;
          best = z;
        }
      }
      return best;
    }
    case OpponentStrategy::Kind::kBestResponseToEmpirical: {
      const ScalarMatrix& u = *problem.utility;
      int best = 0;
      double best_value = INFINITY;
      for (int z = 0; z < u.cols(); ++z) {
        double v = 0.0;
        for (int a = 0; a < u.rows(); ++a) {
          const double pa = view.p_empirical.empty() ? 1.0 / u.rows() : view.p_empirical[a];
          v += pa * u(a, z);
        }
        if (v < best_value) {
          best_value = v;
          best = z;
        }
      }
      return best;
    }
  }
  return 0;
}

void validate_problem(const ApproachProblem& problem, std::uint64_t seed) {
  const int nz = problem.game.n_opp();
  for (int z = 0; z < nz; ++z) certify_response(problem, MixedAction::Pure(nz, z));
  Rng rng(seed, Stream::kValidation);
  for (int i = 0; i < kValidationSamples; ++i) certify_response(problem, RandomMixed(nz, rng));
}

RunReport run(const ApproachProblem& problem, const RunConfig& config, std::uint64_t seed,
              const StepSink& sink) {
  const auto start = std::chrono::steady_clock::now();
  const VectorGame& game = problem.game;
  const Algorithm alg = config.algorithm;
  if (config.n_steps < 0) throw ValidationError("n_steps must be >= 0");
  if (problem.target.dim() != game.dim()) {
    throw DimensionError("target dimension does not match the payoff dimension");
  }
  validate_opponent(config.opponent, problem);
  if (!ResponseBased(alg)) {
    const TargetSet& set = problem.target.set();
    if (alg == Algorithm::kOgd && !set.bounded()) {
      throw ValidationError("ogd-support needs a compact target; the " + set.kind_name() +
                            " target is unbounded");
    }
  }
  if (alg == Algorithm::kUnbounded && !problem.target.recession_is_quadrant()) {
    throw ValidationError("response-based+unbounded needs a target whose recession cone is a "
                          "quadrant");
  }
  validate_problem(problem, seed);

  RunReport report;
  report.scenario_id = config.scenario_id;
  report.seed = seed;
  report.algorithm = algorithm_name(alg);
  report.certified = certified_algorithm(alg);

  Rng agent_rng(seed, Stream::kAgent);
  Rng opp_rng(seed, Stream::kOpponent);
  const double rho = game.rho();
  const int dim = game.dim();
  LearnerState state = initial_state(dim, VariantOf(alg));
  std::vector<double> r_bar(dim, 0.0), realized_bar(dim, 0.0);
  std::vector<double> theta(dim, 0.0), r_prev;
  std::vector<double> p_sum(game.n_agent(), 0.0), p_mean;

  auto fail = [&](FailureKind kind, int n, const std::string& msg) {
    if (report.failure != FailureKind::kNone) return;
    report.failure = kind;
    report.failure_step = n;
    report.failure_message = msg;
  };

  for (int n = 1; n <= config.n_steps; ++n) {
    StepRecord rec;
    rec.n = n;
    try {
      if (ResponseBased(alg)) {
        const PlannedStep plan = plan_step(state, problem);
        const OpponentView view{n, &plan.p, plan.direction, p_mean};
        const int z = opponent_act(config.opponent, problem, view, opp_rng);
        const int a = sample_action(plan.p, agent_rng);
        LearnerState next = commit_step(state, plan, problem, a, z);
        rec.r = reward_against(game, plan.p, z);
        const auto realized = game.entry(a, z);
        rec.realized.assign(realized.begin(), realized.end());
        const auto& entering = alg == Algorithm::kRealized ? rec.realized : rec.r;
        const AuditResult audit = audit_recursion(state, next, plan, entering, rec.r, rho);
        rec.p = plan.p.vec();
        rec.a = a;
        rec.z = z;
        rec.q_star = plan.q_star.vec();
        rec.p_star = plan.p_star.vec();
        rec.r_star = plan.r_star;
        rec.game_value = plan.game_value;
        rec.recursion_audit_pass = audit.pass;
        rec.descent = audit.descent;
        rec.lambda_norm = norm(next.lambda);
        state = std::move(next);
        rec.r_bar = state.r_bar;
        rec.r_star_bar = state.r_star_bar;
        rec.realized_bar = state.realized_bar;
      } else {
        const TargetSet& set = problem.target.set();
        MixedAction p = MixedAction::Uniform(game.n_agent());
        std::vector<double> w;
        if (alg == Algorithm::kPrimal) {
          PrimalPlan pp = primal_plan(n == 1 ? std::span<const double>() : r_bar, set, game);
          p = pp.p;
          theta = pp.theta.empty() ? std::vector<double>(dim, 0.0) : pp.theta;
          w = theta;
        } else {
          OgdPlan og = ogd_support_plan(theta, r_prev, set, game, n);
          p = og.p;
          theta = og.theta;
          for (double t : theta) w.push_back(-t);
        }
        const OpponentView view{n, &p, w, p_mean};
        const int z = opponent_act(config.opponent, problem, view, opp_rng);
        const int a = sample_action(p, agent_rng);
        rec.p = p.vec();
        rec.a = a;
        rec.z = z;
        rec.r = reward_against(game, p, z);
        const auto realized = game.entry(a, z);
        rec.realized.assign(realized.begin(), realized.end());
        Average(r_bar, rec.r, n);
        Average(realized_bar, rec.realized, n);
        r_prev = rec.r;
        rec.r_bar = r_bar;
        rec.realized_bar = realized_bar;
        rec.lambda_norm = norm(theta);
      }
    } catch (const CertificationError& e) {
      fail(FailureKind::kCertification, n, e.what());
      break;
    } catch (const SolverError& e) {
      fail(FailureKind::kSolver, n, e.what());
      break;
    } catch (const ValidationError& e) {
      fail(FailureKind::kValidation, n, e.what());
      break;
    }

    for (int a = 0; a < game.n_agent(); ++a) p_sum[a] += rec.p[a];
    p_mean.resize(game.n_agent());
    for (int a = 0; a < game.n_agent(); ++a) p_mean[a] = p_sum[a] / n;

    if (problem.target.geometric()) {
      rec.dist_to_S = distance(problem.target.set(),
                               alg == Algorithm::kRealized ? rec.realized_bar : rec.r_bar);
    }
    if (report.certified) {
      const double sqrt_n = std::sqrt(static_cast<double>(n));
      rec.bound_ratio = rho > 0.0 ? rec.lambda_norm * sqrt_n / rho : 0.0;
      report.max_bound_ratio = std::max(report.max_bound_ratio, *rec.bound_ratio);
      bool ok = rec.lambda_norm <= rho / sqrt_n + kBoundTol;
      if (rec.dist_to_S) ok = ok && *rec.dist_to_S <= rec.lambda_norm + kBoundTol;
      if (!ok) {
        report.bounds_passed = false;
        fail(FailureKind::kBound, n,
             "step " + std::to_string(n) + ": |lambda|=" + std::to_string(rec.lambda_norm) +
                 " exceeds rho/sqrt(n)=" + std::to_string(rho / sqrt_n));
      }
    }
    if (!rec.recursion_audit_pass) {
      report.audits_passed = false;
      fail(FailureKind::kAudit, n,
           "step " + std::to_string(n) + ": recursion audit failed (descent term " +
               std::to_string(rec.descent) + ")");
    }
    report.n_steps = n;
    report.final_dist = rec.dist_to_S;
    report.final_lambda_norm = rec.lambda_norm;
    if (sink) sink(rec);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CollectedRun run_collect(const ApproachProblem& problem, const RunConfig& config,
                         std::uint64_t seed) {
  CollectedRun out;
  out.steps.reserve(config.n_steps);
  out.report = run(problem, config, seed, [&](const StepRecord& r) { out.steps.push_back(r); });
  return out;
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = prob * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

SweepResult sweep(const ApproachProblem& problem, const RunConfig& config,
                  const std::vector<std::uint64_t>& seeds, const SweepConfig& sweep_config,
                  unsigned threads) {
  if (seeds.empty()) throw ValidationError("sweep needs at least one seed");
  if (!(sweep_config.delta > 0.0 && sweep_config.delta < 1.0)) {
    throw ValidationError("sweep delta must lie in (0, 1)");
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, seeds.size());

  std::vector<std::vector<double>> norms(seeds.size());
  std::vector<RunReport> reports(seeds.size());
  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < seeds.size(); i += threads) {
      norms[i].reserve(config.n_steps);
      reports[i] = run(problem, config, seeds[i],
                       [&](const StepRecord& r) { norms[i].push_back(r.lambda_norm); });
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < threads; ++w) jobs.push_back(std::async(std::launch::async, work, w));
    for (auto& j : jobs) j.get();
  }

  std::vector<std::vector<double>> tail(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    tail[i] = norms[i];
    for (std::size_t k = tail[i].size(); k-- > 1;) {
      tail[i][k - 1] = std::max(tail[i][k - 1], tail[i][k]);
    }
  }
  SweepResult out;
  out.reports = std::move(reports);
  const double rho = problem.game.rho();
  for (int n : sweep_config.checkpoints) {
    if (n < 1 || n > config.n_steps) continue;
    std::vector<double> at_n;
    int violations = 0;
    SweepRow row;
    row.n_checkpoint = n;
    row.bound = std::sqrt(6.0 * rho * rho / (sweep_config.delta * n));
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (static_cast<int>(norms[i].size()) < n) continue;
      at_n.push_back(norms[i][n - 1]);
      if (tail[i][n - 1] > row.bound) ++violations;
    }
    if (at_n.empty()) continue;
    row.quantile_50 = quantile(at_n, 0.5);
    row.quantile_95 = quantile(at_n, 0.95);
    row.max = *std::max_element(at_n.begin(), at_n.end());
    row.violation_fraction = static_cast<double>(violations) / at_n.size();
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace rba
