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

#include "rba/approach.h"

#include <algorithm>
#include <cmath>

#include "rba/errors.h"

namespace rba {
namespace {

double SquaredNorm(std::span<const double> x) { return dot(x, x); }

std::vector<double> Steered(const LearnerState& s, const std::vector<RecessionDirection>& rec) {
  if (s.variant == Variant::kUnbounded) return steer_unbounded(s.scaled, rec);
  return s.scaled;
}

void Average(std::vector<double>& bar, std::span<const double> x, int n) {
  for (std::size_t k = 0; k < bar.size(); ++k) bar[k] += (x[k] - bar[k]) / n;
}

// Maximizer of the game projected on w, or uniform when w vanishes.
SaddlePoint SolveDirection(const VectorGame& game, std::span<const double> w) {
  if (norm(w) <= kDegenerateLambda) {
    return SaddlePoint{MixedAction::Uniform(game.n_agent()), MixedAction::Uniform(game.n_opp()),
                       0.0};
  }
  return solve_zero_sum(project_game(game, w));
}

}  // namespace

// -- Target -------------------------------------------------------------------

Target::Target(TargetSet set) : dim_(set.dim()), set_(std::move(set)) {}

Target::Target(int dim, GraphTarget graph) : dim_(dim), graph_(std::move(graph)) {
  if (dim < 1) throw ValidationError("target dimension must be >= 1");
  if (!graph_->violation) throw ValidationError("graph target needs a violation function");
  for (const auto& d : graph_->recession) {
    if (d.axis < 0 || d.axis >= dim || (d.sign != 1 && d.sign != -1)) {
      throw ValidationError("graph target recession direction out of range");
    }
  }
}

const TargetSet& Target::set() const {
  if (!set_) throw ValidationError("target " + description() + " has no geometric description");
  return *set_;
}

double Target::violation(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw DimensionError("target of dimension " + std::to_string(dim_) +
                         " queried with a point of dimension " + std::to_string(x.size()));
  }
  if (set_) return distance(*set_, x);
  return graph_->violation(x);
}

const std::vector<RecessionDirection>& Target::recession() const {
  return set_ ? set_->quadrant_recession() : graph_->recession;
}

bool Target::recession_is_quadrant() const {
  return set_ ? set_->recession_is_quadrant() : true;
}

std::string Target::description() const {
  return set_ ? set_->kind_name() : graph_->description;
}

std::vector<double> certify_response(const ApproachProblem& problem, const MixedAction& q,
                                     double tol) {
  const MixedAction p = problem.oracle.respond(q);
  if (p.size() != problem.game.n_agent()) {
    throw CertificationError("oracle " + problem.oracle.name + " returned an action of size " +
                             std::to_string(p.size()) + " for a game with " +
                             std::to_string(problem.game.n_agent()) + " agent actions");
  }
  auto r = expected_reward(problem.game, p, q);
  const double v = problem.target.violation(r);
  if (!(v <= tol)) {
    throw CertificationError("oracle " + problem.oracle.name + " is not certified at q=" +
                             format_vector(q.probs()) + ": r(p*, q)=" + format_vector(r) +
                             " violates the " + problem.target.description() + " target by " +
                             std::to_string(v));
  }
  return r;
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kSmoothed: return "smoothed";
    case Variant::kIdling: return "idling";
    case Variant::kUnbounded: return "unbounded";
    case Variant::kRealized: return "realized";
  }
  return "unknown";
}

LearnerState initial_state(int dim, Variant variant) {
  LearnerState s;
  s.variant = variant;
  s.r_bar.assign(dim, 0.0);
  s.r_star_bar.assign(dim, 0.0);
  s.realized_bar.assign(dim, 0.0);
  s.plain_lambda.assign(dim, 0.0);
  s.scaled.assign(dim, 0.0);
  s.scaled_lambda.assign(dim, 0.0);
  s.lambda.assign(dim, 0.0);
  return s;
}

// -- Response-based step ------------------------------------------------------

PlannedStep plan_step(const LearnerState& state, const ApproachProblem& problem) {
  const VectorGame& game = problem.game;
  if (static_cast<int>(state.lambda.size()) != game.dim()) {
    throw DimensionError("plan_step: state dimension does not match the game");
  }
  SaddlePoint sp = SolveDirection(game, state.lambda);
  const MixedAction p_star = problem.oracle.respond(sp.q);
  if (p_star.size() != game.n_agent()) {
    throw CertificationError("oracle " + problem.oracle.name + " returned an action of size " +
                             std::to_string(p_star.size()));
  }
  auto r_star = expected_reward(game, p_star, sp.q);
  const double v = problem.target.violation(r_star);
  if (!(v <= kOracleTol)) {
    throw CertificationError("step " + std::to_string(state.n + 1) + ": oracle " +
                             problem.oracle.name + " response to q*=" +
                             format_vector(sp.q.probs()) + " gives r*=" + format_vector(r_star) +
                             ", which violates the " + problem.target.description() +
                             " target by " + std::to_string(v));
  }
  PlannedStep plan{sp.p, sp.q, p_star, std::move(r_star), sp.value, state.lambda, true};
  for (int z = 0; z < game.n_opp() && plan.saddle_ok; ++z) {
    plan.saddle_ok = dot(plan.direction, reward_against(game, plan.p, z)) >=
                     plan.game_value - kCertificateTol;
  }
  plan.saddle_ok = plan.saddle_ok &&
                   plan.game_value >= dot(plan.direction, plan.r_star) - kCertificateTol;
  return plan;
}

std::vector<double> idle_update(std::span<const double> lambda_prev, int n,
                                std::span<const double> r_star, std::span<const double> r_n,
                                std::span<const double> r_bar_n, const Target& target) {
  if (n < 1) throw ValidationError("idle_update: step index must be >= 1");
  std::vector<double> out(lambda_prev.size(), 0.0);
  if (target.contains(r_bar_n)) return out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = ((n - 1) * lambda_prev[k] + (r_star[k] - r_n[k])) / n;
  }
  return out;
}

LearnerState commit_step(const LearnerState& state, const PlannedStep& plan,
                         const ApproachProblem& problem, int a_n, int z_n) {
  const VectorGame& game = problem.game;
  if (a_n < 0 || a_n >= game.n_agent() || z_n < 0 || z_n >= game.n_opp()) {
    throw ValidationError("commit_step: action index out of range");
  }
  LearnerState next = state;
  next.n = state.n + 1;
  const auto r_n = reward_against(game, plan.p, z_n);
  const auto realized = game.entry(a_n, z_n);
  Average(next.r_bar, r_n, next.n);
  Average(next.r_star_bar, plan.r_star, next.n);
  Average(next.realized_bar, realized, next.n);
  for (int k = 0; k < game.dim(); ++k) next.plain_lambda[k] = next.r_star_bar[k] - next.r_bar[k];

  const std::span<const double> entering =
      state.variant == Variant::kRealized ? realized : std::span<const double>(r_n);
  const bool reset = state.variant == Variant::kIdling && problem.target.contains(next.r_bar);
  for (int k = 0; k < game.dim(); ++k) {
    next.scaled[k] = reset ? 0.0 : next.scaled[k] + (plan.r_star[k] - entering[k]);
  }
  // The steering map is positively homogeneous, so steering the sum gives
  // n times the steered direction.
  next.scaled_lambda = Steered(next, problem.target.recession());
  for (int k = 0; k < game.dim(); ++k) next.lambda[k] = next.scaled_lambda[k] / next.n;
  return next;
}

AuditResult audit_recursion(const LearnerState& prev, const LearnerState& next,
                            const PlannedStep& plan, std::span<const double> r_n,
                            std::span<const double> r_smoothed, double rho) {
  AuditResult out;
  const auto& s_prev = prev.scaled_lambda;
  const auto& s_next = next.scaled_lambda;
  double cross = 0.0;
  for (std::size_t k = 0; k < s_prev.size(); ++k) cross += s_prev[k] * (plan.r_star[k] - r_n[k]);
  out.lhs = SquaredNorm(s_next);
  out.rhs = SquaredNorm(s_prev) + 2.0 * cross + rho * rho;
  for (std::size_t k = 0; k < plan.direction.size(); ++k) {
    out.descent += plan.direction[k] * (plan.r_star[k] - r_smoothed[k]);
  }
  out.pass = out.lhs <= out.rhs + kAuditSlack && out.descent <= kDescentTol && plan.saddle_ok;
  return out;
}

// -- Baselines ----------------------------------------------------------------

PrimalPlan primal_plan(std::span<const double> r_bar, const TargetSet& set,
                       const VectorGame& game) {
  if (r_bar.empty() || contains(set, r_bar, kMembershipTol)) {
    return PrimalPlan{MixedAction::Uniform(game.n_agent()), {}};
  }
  auto theta = project(set, r_bar);
  for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= r_bar[k];
  return PrimalPlan{SolveDirection(game, theta).p, std::move(theta)};
}

OgdPlan ogd_support_plan(std::span<const double> theta_prev, std::span<const double> r_prev,
                         const TargetSet& set, const VectorGame& game, int n) {
  if (!set.bounded()) {
    throw ValidationError("ogd-support needs a compact target; the " + set.kind_name() +
                          " target is unbounded");
  }
  if (static_cast<int>(theta_prev.size()) != game.dim()) {
    throw DimensionError("ogd_support_plan: theta has the wrong dimension");
  }
  std::vector<double> theta(theta_prev.begin(), theta_prev.end());
  if (!r_prev.empty()) {
    const double rho_g = game.rho() + set.diameter_bound();
    const double eta = rho_g > 0.0 ? 1.0 / (rho_g * std::sqrt(static_cast<double>(n))) : 0.0;
    const auto s = support_argmax(set, theta_prev);
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += eta * (r_prev[k] - s[k]);
    const double len = norm(theta);
    if (len > 1.0) {
      for (double& x : theta) x /= len;
    }
  }
  std::vector<double> neg(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) neg[k] = -theta[k];
  return OgdPlan{theta, SolveDirection(game, neg).p};
}

}  // namespace rba
