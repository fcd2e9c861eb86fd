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

#ifndef RBA_APPROACH_H_
#define RBA_APPROACH_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rba/games.h"
#include "rba/sets.h"

namespace rba {

// Hard-fail threshold for target points produced by a response oracle.
inline constexpr double kOracleTol = 1e-6;
// Steering directions shorter than this give the degenerate (uniform) plan.
inline constexpr double kDegenerateLambda = 1e-12;
inline constexpr double kAuditSlack = 1e-9;
inline constexpr double kDescentTol = 1e-8;

// Target of the form {(v, q) : v in V*(q)}. No projection is available, only
// a violation measure that is zero on the set.
struct GraphTarget {
  std::string description;
  std::function<double(std::span<const double>)> violation;
  std::vector<RecessionDirection> recession;
};

class Target {
 public:
  explicit Target(TargetSet set);
  Target(int dim, GraphTarget graph);

  int dim() const { return dim_; }
  bool geometric() const { return set_.has_value(); }
  // Throws ValidationError for graph targets.
  const TargetSet& set() const;
  // Euclidean distance for geometric targets; the graph violation otherwise.
  double violation(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = kMembershipTol) const {
    return violation(x) <= tol;
  }
  const std::vector<RecessionDirection>& recession() const;
  bool recession_is_quadrant() const;
  std::string description() const;

 private:
  int dim_ = 0;
  std::optional<TargetSet> set_;
  std::optional<GraphTarget> graph_;
};

struct ResponseOracle {
  std::string name;
  std::function<MixedAction(const MixedAction& q)> respond;
};

struct ApproachProblem {
  std::string kind;
  VectorGame game;
  Target target;
  ResponseOracle oracle;
  // Scalar utility, for problems built from one.
  std::optional<ScalarMatrix> utility;
};

// Evaluates the oracle at q and returns r(respond(q), q). Throws
// CertificationError if that point violates the target by more than tol.
std::vector<double> certify_response(const ApproachProblem& problem, const MixedAction& q,
                                     double tol = kOracleTol);

enum class Variant { kSmoothed, kIdling, kUnbounded, kRealized };

std::string variant_name(Variant v);

struct LearnerState {
  Variant variant = Variant::kSmoothed;
  int n = 0;
  std::vector<double> r_bar;         // average of r(p_k, z_k)
  std::vector<double> r_star_bar;    // average of r*_k
  std::vector<double> realized_bar;  // average of r(a_k, z_k)
  std::vector<double> plain_lambda;  // r_star_bar - r_bar
  // n times the unsteered variant direction: sum of r*_k - r_k for the
  // smoothed, unbounded and realized variants, the idling recursion for idling.
  std::vector<double> scaled;
  // n * lambda, with recession steering applied for the unbounded variant.
  std::vector<double> scaled_lambda;
  // Steering direction used by the next plan.
  std::vector<double> lambda;
};

LearnerState initial_state(int dim, Variant variant);

struct PlannedStep {
  MixedAction p;       // agent action p_n
  MixedAction q_star;  // minimizer of the projected game
  MixedAction p_star;  // oracle response to q_star
  std::vector<double> r_star;
  double game_value = 0.0;
  std::vector<double> direction;  // steering direction the game was projected on
  // lambda . r(p, z) >= value >= lambda . r_star up to kCertificateTol.
  bool saddle_ok = true;
};

PlannedStep plan_step(const LearnerState& state, const ApproachProblem& problem);

// r_n is the reward that enters the variant's direction: smoothed r(p_n, z_n)
// for every variant except realized, which uses r(a_n, z_n).
LearnerState commit_step(const LearnerState& state, const PlannedStep& plan,
                         const ApproachProblem& problem, int a_n, int z_n);

// Idling recursion: ((n-1) lambda_prev + r_star - r_n) / n, or zero when the
// new average reward r_bar_n is in the target.
std::vector<double> idle_update(std::span<const double> lambda_prev, int n,
                                std::span<const double> r_star, std::span<const double> r_n,
                                std::span<const double> r_bar_n, const Target& target);

struct AuditResult {
  bool pass = true;
  double lhs = 0.0;      // n^2 |lambda_n|^2
  double rhs = 0.0;      // (n-1)^2 |lambda_{n-1}|^2 + 2(n-1) lambda_{n-1}.(r* - r_n) + rho^2
  double descent = 0.0;  // lambda_{n-1} . (r*_n - r(p_n, z_n))
};

// Checks the one-step recursion between consecutive states together with the
// descent sign of the smoothed step. r_n is the reward entering the direction.
AuditResult audit_recursion(const LearnerState& prev, const LearnerState& next,
                            const PlannedStep& plan, std::span<const double> r_n,
                            std::span<const double> r_smoothed, double rho);

struct PrimalPlan {
  MixedAction p;
  std::vector<double> theta;  // project(S, r_bar) - r_bar; empty when r_bar is in S
};

// r_bar empty means no history yet.
PrimalPlan primal_plan(std::span<const double> r_bar, const TargetSet& set,
                       const VectorGame& game);

struct OgdPlan {
  std::vector<double> theta;
  MixedAction p;
};

// r_prev empty at the first step, where theta stays at theta_prev.
OgdPlan ogd_support_plan(std::span<const double> theta_prev, std::span<const double> r_prev,
                         const TargetSet& set, const VectorGame& game, int n);

}  // namespace rba

#endif  // RBA_APPROACH_H_
