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

#ifndef RBA_REGRET_H_
#define RBA_REGRET_H_

#include <span>
#include <string>
#include <vector>

#include "rba/approach.h"
#include "rba/games.h"
#include "rba/sets.h"

namespace rba {

// Tolerance for the q-block of a stacked point to count as a distribution.
inline constexpr double kSimplexTol = 1e-6;

struct Play {
  MixedAction p;  // agent mixed action at the step
  int a = 0;      // sampled agent action
  int z = 0;      // opponent action
};
using History = std::vector<Play>;

// L_n(a') = mean of u(a', z_k) - u_k, with u_k = u(a_k, z_k), or u(p_k, z_k)
// when smoothed.
std::vector<double> external_regret(const History& history, const ScalarMatrix& u,
                                    bool smoothed = false);
// I_n[a][a'] = mean of 1{a_k = a} (u(a', z_k) - u(a, z_k)); p_k(a) replaces the
// indicator when smoothed.
std::vector<std::vector<double>> internal_regret(const History& history, const ScalarMatrix& u,
                                                 bool smoothed = false);

MixedAction regret_matching_policy(std::span<const double> regrets);

// Lowest-index argmax of u(a, q).
int best_response(const ScalarMatrix& u, const MixedAction& q);
double best_reward(const ScalarMatrix& u, const MixedAction& q);  // u*(q)

ApproachProblem build_external_game(const ScalarMatrix& u);
ApproachProblem build_internal_game(const ScalarMatrix& u);
ApproachProblem build_blackwell_embedding(const ScalarMatrix& u);

// Generalized no-regret problem: payoff v(a, z) in R^K, a response map and a
// satisficing test for v against q.
struct SatisficingProblem {
  std::string name;
  VectorGame v;
  std::function<MixedAction(const MixedAction& q)> respond;
  // Zero iff v is in V*(q).
  std::function<double(std::span<const double> v, const MixedAction& q)> violation;
  // Recession directions inside the v block.
  std::vector<RecessionDirection> recession;
};

// Stacked game (v(a, z), e_z) with target {(v, q) : v in V*(q)}.
ApproachProblem build_generalized(SatisficingProblem problem);

// Splits a stacked point (v, q) and returns q if the tail lies within
// kSimplexTol of the simplex (renormalized), or nullopt.
std::optional<MixedAction> stacked_distribution(std::span<const double> x, int v_dim);

// -- Global costs --------------------------------------------------------------

enum class GlobalCost { kAbsoluteValue, kDNorm, kInfNorm };

struct GlobalCostSpec {
  GlobalCost kind = GlobalCost::kAbsoluteValue;
  double d = 2.0;  // DNorm exponent, > 1
};

// v(a, z) = loss(a, z) e_a.
VectorGame load_balancing_payoff(const ScalarMatrix& loss);
double global_cost_value(const GlobalCostSpec& g, std::span<const double> v);
// Minimizer of G(v(p, q)). v is the scalar game for the absolute value and
// the load-balancing payoff otherwise.
MixedAction global_cost_response(const GlobalCostSpec& g, const VectorGame& v,
                                 const MixedAction& q);
// G*(q) = min_p G(v(p, q)).
double global_cost_star(const GlobalCostSpec& g, const VectorGame& v, const MixedAction& q);
// values is the scalar v for the absolute value, the loss matrix otherwise.
ApproachProblem build_global(const GlobalCostSpec& g, const ScalarMatrix& values);

// Upper concave envelope of the points (xs[i], ys[i]), xs increasing,
// evaluated at the same abscissae.
std::vector<double> upper_concave_envelope(std::span<const double> xs,
                                           std::span<const double> ys);

// -- Reward to cost ratio ------------------------------------------------------

int ratio_response(const ScalarMatrix& u, const ScalarMatrix& c, const MixedAction& q);
double rho_star(const ScalarMatrix& u, const ScalarMatrix& c, const MixedAction& q);
double rho1_at_pure(const ScalarMatrix& u, const ScalarMatrix& c, int z);
// Stacked payoff (u, c, e_z).
ApproachProblem build_ratio(const ScalarMatrix& u, const ScalarMatrix& c);

// -- Constrained regret --------------------------------------------------------

struct ConstrainedResponse {
  MixedAction p;
  double value = 0.0;  // u*_Gamma(q)
};

// cost is a game with dim s (one cost vector per (a, z)); gamma must have a
// halfspace form. Throws ValidationError when no p satisfies the constraint.
ConstrainedResponse constrained_response(const ScalarMatrix& u, const VectorGame& cost,
                                         const TargetSet& gamma, const MixedAction& q);
// Stacked payoff (u, c, e_z).
ApproachProblem build_constrained(const ScalarMatrix& u, const VectorGame& cost,
                                  const TargetSet& gamma);

// -- Generic vector games ------------------------------------------------------

struct GenericResponse {
  enum class Rule { kFixed, kLp };
  Rule rule = Rule::kLp;
  std::vector<double> p;  // kFixed only
};

// kLp minimizes the worst halfspace violation of r(p, q) over p; it needs a
// polyhedral target and throws ValidationError when S cannot be reached at q.
ApproachProblem build_generic_vector(const VectorGame& game, const TargetSet& set,
                                     const GenericResponse& response);

}  // namespace rba

#endif  // RBA_REGRET_H_
