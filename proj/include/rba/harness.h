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

#ifndef RBA_HARNESS_H_
#define RBA_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rba/approach.h"
#include "rba/games.h"
#include "rba/rng.h"

namespace rba {

inline constexpr double kBoundTol = 1e-7;
// Random opponent actions certified before step 1, besides every pure one.
inline constexpr int kValidationSamples = 20;

enum class Algorithm { kResponseBased, kIdling, kUnbounded, kRealized, kPrimal, kOgd };

std::string algorithm_name(Algorithm a);
// Throws ValidationError on an unknown name.
Algorithm parse_algorithm(const std::string& name);
// True for the variants with a deterministic rho / sqrt(n) guarantee.
bool certified_algorithm(Algorithm a);

struct OpponentStrategy {
  enum class Kind { kFixedMixed, kPeriodicPure, kAdversarialOmniscient, kBestResponseToEmpirical };
  Kind kind = Kind::kFixedMixed;
  std::vector<double> q;      // kFixedMixed
  std::vector<int> sequence;  // kPeriodicPure

  bool operator==(const OpponentStrategy&) const = default;
};

std::string opponent_kind_name(OpponentStrategy::Kind k);
OpponentStrategy::Kind parse_opponent_kind(const std::string& name);
// Throws ValidationError if the strategy does not fit the problem.
void validate_opponent(const OpponentStrategy& s, const ApproachProblem& problem);

// What the opponent may look at when choosing z_n.
struct OpponentView {
  int n = 1;
  const MixedAction* p = nullptr;       // agent action p_n
  std::span<const double> direction;    // agent's steering direction; z minimizes w . r(p_n, z)
  std::span<const double> p_empirical;  // mean of p_1 .. p_{n-1}; empty at n = 1
};

int opponent_act(const OpponentStrategy& s, const ApproachProblem& problem,
                 const OpponentView& view, Rng& rng);

struct RunConfig {
  std::string scenario_id;
  Algorithm algorithm = Algorithm::kResponseBased;
  OpponentStrategy opponent;
  int n_steps = 0;
};

struct StepRecord {
  int n = 0;
  std::vector<double> p;       // p_n
  int a = 0;                   // a_n
  int z = 0;                   // z_n
  std::vector<double> q_star;  // empty for the baselines
  std::vector<double> p_star;
  std::vector<double> r;       // r(p_n, z_n)
  std::vector<double> realized;  // r(a_n, z_n)
  std::vector<double> r_star;
  std::vector<double> r_bar;
  std::vector<double> r_star_bar;
  std::vector<double> realized_bar;
  double lambda_norm = 0.0;
  std::optional<double> dist_to_S;
  std::optional<double> game_value;
  bool recursion_audit_pass = true;
  double descent = 0.0;
  std::optional<double> bound_ratio;
};

enum class FailureKind { kNone, kAudit, kBound, kCertification, kSolver, kValidation };

struct RunReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string algorithm;
  int n_steps = 0;  // steps completed
  double max_bound_ratio = 0.0;
  std::optional<double> final_dist;
  double final_lambda_norm = 0.0;
  bool certified = false;
  bool audits_passed = true;
  bool bounds_passed = true;
  FailureKind failure = FailureKind::kNone;
  int failure_step = 0;
  std::string failure_message;
  double wall_seconds = 0.0;

  bool ok() const { return failure == FailureKind::kNone; }
};

std::string failure_kind_name(FailureKind k);

using StepSink = std::function<void(const StepRecord&)>;

// Certifies the oracle at every pure opponent action and kValidationSamples
// random ones. Throws CertificationError or ValidationError.
void validate_problem(const ApproachProblem& problem, std::uint64_t seed);

// Runs one trajectory. Errors before step 1 are thrown; failures during the
// run stop it and are recorded in the report.
RunReport run(const ApproachProblem& problem, const RunConfig& config, std::uint64_t seed,
              const StepSink& sink = {});

struct CollectedRun {
  std::vector<StepRecord> steps;
  RunReport report;
};
CollectedRun run_collect(const ApproachProblem& problem, const RunConfig& config,
                         std::uint64_t seed);

struct SweepConfig {
  std::vector<int> checkpoints = {10, 100, 1000, 10000};
  double delta = 0.1;

  bool operator==(const SweepConfig&) const = default;
};

struct SweepRow {
  int n_checkpoint = 0;
  double quantile_50 = 0.0;
  double quantile_95 = 0.0;
  double max = 0.0;
  double bound = 0.0;  // sqrt(6 rho^2 / (delta n))
  double violation_fraction = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RunReport> reports;  // in seed order
};

// Linear-interpolation quantile of unsorted values.
double quantile(std::vector<double> values, double prob);

// Runs every seed (in parallel when threads > 1) and aggregates |lambda_n| at
// each checkpoint within the horizon. A seed violates the bound at n when
// max_{k >= n} |lambda_k| exceeds it.
SweepResult sweep(const ApproachProblem& problem, const RunConfig& config,
                  const std::vector<std::uint64_t>& seeds, const SweepConfig& sweep_config,
                  unsigned threads = 0);

}  // namespace rba

#endif  // RBA_HARNESS_H_
