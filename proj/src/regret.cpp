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

#include "rba/regret.h"

#include <algorithm>
#include <cmath>

#include "rba/errors.h"
#include "rba/lp.h"

namespace rba {
namespace {

// u(a, q) for every a.
std::vector<double> ActionValues(const ScalarMatrix& u, const MixedAction& q) {
  if (q.size() != u.cols()) {
    throw DimensionError("opponent action of size " + std::to_string(q.size()) +
                         " for a game with " + std::to_string(u.cols()) + " opponent actions");
  }
  std::vector<double> out(u.rows(), 0.0);
  for (int a = 0; a < u.rows(); ++a) {
    for (int z = 0; z < u.cols(); ++z) out[a] += u(a, z) * q[z];
  }
  return out;
}

int ArgMax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

void CheckHistory(const History& history, const ScalarMatrix& u) {
  if (history.empty()) throw ValidationError("regret of an empty history");
  for (const auto& h : history) {
    if (h.a < 0 || h.a >= u.rows() || h.z < 0 || h.z >= u.cols() || h.p.size() != u.rows()) {
      throw DimensionError("history entry does not match the utility matrix");
    }
  }
}

double StepUtility(const Play& h, const ScalarMatrix& u, bool smoothed) {
  if (!smoothed) return u(h.a, h.z);
  double s = 0.0;
  for (int a = 0; a < u.rows(); ++a) s += h.p[a] * u(a, h.z);
  return s;
}

// Expected cost vector c(a, q) for every a.
std::vector<std::vector<double>> CostValues(const VectorGame& cost, const MixedAction& q) {
  std::vector<std::vector<double>> out(cost.n_agent(), std::vector<double>(cost.dim(), 0.0));
  for (int a = 0; a < cost.n_agent(); ++a) {
    for (int z = 0; z < cost.n_opp(); ++z) {
      const auto e = cost.entry(a, z);
      for (int k = 0; k < cost.dim(); ++k) out[a][k] += q[z] * e[k];
    }
  }
  return out;
}

std::vector<double> Stack(std::span<const double> head, int z, int n_opp) {
  std::vector<double> out(head.begin(), head.end());
  out.resize(head.size() + n_opp, 0.0);
  out[head.size() + z] = 1.0;
  return out;
}

}  // namespace

// -- Regret measures ----------------------------------------------------------

std::vector<double> external_regret(const History& history, const ScalarMatrix& u,
                                    bool smoothed) {
  CheckHistory(history, u);
  std::vector<double> l(u.rows(), 0.0);
  for (const auto& h : history) {
    const double uk = StepUtility(h, u, smoothed);
    for (int a = 0; a < u.rows(); ++a) l[a] += u(a, h.z) - uk;
  }
  for (double& x : l) x /= static_cast<double>(history.size());
  return l;
}

std::vector<std::vector<double>> internal_regret(const History& history, const ScalarMatrix& u,
                                                 bool smoothed) {
  CheckHistory(history, u);
  const int na = u.rows();
  std::vector<std::vector<double>> reg(na, std::vector<double>(na, 0.0));
  for (const auto& h : history) {
    for (int a = 0; a < na; ++a) {
      const double w = smoothed ? h.p[a] : (h.a == a ? 1.0 : 0.0);
      if (w == 0.0) continue;
      for (int b = 0; b < na; ++b) reg[a][b] += w * (u(b, h.z) - u(a, h.z));
    }
  }
  for (auto& row : reg)
    for (double& x : row) x /= static_cast<double>(history.size());
  return reg;
}

MixedAction regret_matching_policy(std::span<const double> regrets) {
  if (regrets.empty()) throw ValidationError("regret matching over an empty action set");
  std::vector<double> pos(regrets.size());
  double total = 0.0;
  for (std::size_t a = 0; a < regrets.size(); ++a) {
    pos[a] = std::max(regrets[a], 0.0);
    total += pos[a];
  }
  if (total <= 0.0) return MixedAction::Uniform(static_cast<int>(regrets.size()));
  return MixedAction::Normalized(std::move(pos));
}

int best_response(const ScalarMatrix& u, const MixedAction& q) {
  return ArgMax(ActionValues(u, q));
}

double best_reward(const ScalarMatrix& u, const MixedAction& q) {
  auto v = ActionValues(u, q);
  return *std::max_element(v.begin(), v.end());
}

// -- Classical constructions --------------------------------------------------

ApproachProblem build_external_game(const ScalarMatrix& u) {
  const int na = u.rows(), nz = u.cols();
  std::vector<double> flat;
  for (int a = 0; a < na; ++a)
    for (int z = 0; z < nz; ++z)
      for (int b = 0; b < na; ++b) flat.push_back(u(b, z) - u(a, z));
  VectorGame game(na, nz, na, std::move(flat));
  ResponseOracle oracle{"best-response", [u](const MixedAction& q) {
                          return MixedAction::Pure(u.rows(), best_response(u, q));
                        }};
  return ApproachProblem{"external", std::move(game), Target(TargetSet::NonpositiveOrthant(na)),
                         std::move(oracle), u};
}

ApproachProblem build_internal_game(const ScalarMatrix& u) {
  const int na = u.rows(), nz = u.cols();
  std::vector<double> flat;
  for (int a = 0; a < na; ++a)
    for (int z = 0; z < nz; ++z)
      for (int a1 = 0; a1 < na; ++a1)
        for (int a2 = 0; a2 < na; ++a2) flat.push_back(a == a1 ? u(a2, z) - u(a1, z) : 0.0);
  VectorGame game(na, nz, na * na, std::move(flat));
  ResponseOracle oracle{"best-response", [u](const MixedAction& q) {
                          return MixedAction::Pure(u.rows(), best_response(u, q));
                        }};
  return ApproachProblem{"internal", std::move(game),
                         Target(TargetSet::NonpositiveOrthant(na * na)), std::move(oracle), u};
}

ApproachProblem build_blackwell_embedding(const ScalarMatrix& u) {
  SatisficingProblem sat{
      "u >= u*(q)",
      VectorGame::FromScalar(u),
      [u](const MixedAction& q) { return MixedAction::Pure(u.rows(), best_response(u, q)); },
      [u](std::span<const double> v, const MixedAction& q) {
        return std::max(0.0, best_reward(u, q) - v[0]);
      },
      {{0, +1}}};
  auto out = build_generalized(std::move(sat));
  out.kind = "blackwell";
  out.utility = u;
  return out;
}

std::optional<MixedAction> stacked_distribution(std::span<const double> x, int v_dim) {
  const auto tail = x.subspan(v_dim);
  double total = 0.0;
  std::vector<double> q(tail.begin(), tail.end());
  for (double& w : q) {
    if (!(w >= -kSimplexTol)) return std::nullopt;
    w = std::max(w, 0.0);
    total += w;
  }
  if (q.empty() || !(std::abs(total - 1.0) <= kSimplexTol)) return std::nullopt;
  return MixedAction::Normalized(std::move(q));
}

ApproachProblem build_generalized(SatisficingProblem problem) {
  const VectorGame& v = problem.v;
  const int k = v.dim(), nz = v.n_opp();
  std::vector<double> flat;
  for (int a = 0; a < v.n_agent(); ++a)
    for (int z = 0; z < nz; ++z) {
      auto row = Stack(v.entry(a, z), z, nz);
      flat.insert(flat.end(), row.begin(), row.end());
    }
  VectorGame game(v.n_agent(), nz, k + nz, std::move(flat));
  for (const auto& d : problem.recession) {
    if (d.axis < 0 || d.axis >= k) throw ValidationError("recession axis outside the v block");
  }
  auto violation = problem.violation;
  GraphTarget target{"{(v,q) : " + problem.name + "}",
                     [violation, k](std::span<const double> x) {
                       auto q = stacked_distribution(x, k);
                       if (!q) return static_cast<double>(INFINITY);
                       return violation(x.first(k), *q);
                     },
                     problem.recession};
  ResponseOracle oracle{problem.name, problem.respond};
  return ApproachProblem{"generalized", std::move(game), Target(k + nz, std::move(target)),
                         std::move(oracle), std::nullopt};
}

// -- Global costs --------------------------------------------------------------

VectorGame load_balancing_payoff(const ScalarMatrix& loss) {
  const int na = loss.rows(), nz = loss.cols();
  std::vector<double> flat;
  for (int a = 0; a < na; ++a)
    for (int z = 0; z < nz; ++z) {
      if (!(loss(a, z) >= 0.0)) throw ValidationError("load-balancing losses must be >= 0");
      for (int b = 0; b < na; ++b) flat.push_back(b == a ? loss(a, z) : 0.0);
    }
  return VectorGame(na, nz, na, std::move(flat));
}

double global_cost_value(const GlobalCostSpec& g, std::span<const double> v) {
  switch (g.kind) {
    case GlobalCost::kAbsoluteValue:
      if (v.size() != 1) throw DimensionError("absolute-value cost needs a scalar payoff");
      return std::abs(v[0]);
    case GlobalCost::kInfNorm: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case GlobalCost::kDNorm: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (double x : v) s += std::pow(std::abs(x) / m, g.d);
      return m * std::pow(s, 1.0 / g.d);
    }
  }
  return 0.0;
}

MixedAction global_cost_response(const GlobalCostSpec& g, const VectorGame& v,
                                 const MixedAction& q) {
  const int na = v.n_agent();
  std::vector<double> vals(na, 0.0);
  for (int a = 0; a < na; ++a) {
    double s = 0.0;
    for (int z = 0; z < v.n_opp(); ++z) {
      s += q[z] * (g.kind == GlobalCost::kAbsoluteValue ? v.entry(a, z)[0] : v.entry(a, z)[a]);
    }
    vals[a] = s;
  }
  if (g.kind == GlobalCost::kAbsoluteValue) {
    int pos = -1, neg = -1;
    for (int a = 0; a < na; ++a) {
      if (vals[a] == 0.0) return MixedAction::Pure(na, a);
      if (vals[a] > 0.0 && (pos < 0 || vals[a] < vals[pos])) pos = a;
      if (vals[a] < 0.0 && (neg < 0 || vals[a] > vals[neg])) neg = a;
    }
    if (neg < 0) return MixedAction::Pure(na, pos);
    if (pos < 0) return MixedAction::Pure(na, neg);
    std::vector<double> p(na, 0.0);
    p[pos] = -vals[neg] / (vals[pos] - vals[neg]);
    p[neg] = 1.0 - p[pos];
    return MixedAction::Normalized(std::move(p));
  }
  std::vector<double> w(na, 0.0);
  bool any_zero = false;
  for (int a = 0; a < na; ++a) any_zero = any_zero || vals[a] == 0.0;
  for (int a = 0; a < na; ++a) {
    if (any_zero) {
      w[a] = vals[a] == 0.0 ? 1.0 : 0.0;
    } else if (g.kind == GlobalCost::kInfNorm) {
      w[a] = 1.0 / vals[a];
    } else {
      w[a] = std::pow(vals[a], -g.d / (g.d - 1.0));
    }
  }
  return MixedAction::Normalized(std::move(w));
}

double global_cost_star(const GlobalCostSpec& g, const VectorGame& v, const MixedAction& q) {
  return global_cost_value(g, expected_reward(v, global_cost_response(g, v, q), q));
}

ApproachProblem build_global(const GlobalCostSpec& g, const ScalarMatrix& values) {
  if (g.kind == GlobalCost::kDNorm && !(g.d > 1.0 && std::isfinite(g.d))) {
    throw ValidationError("d-norm load balancing needs a finite exponent d > 1");
  }
  VectorGame v = g.kind == GlobalCost::kAbsoluteValue ? VectorGame::FromScalar(values)
                                                      : load_balancing_payoff(values);
  std::string kind = g.kind == GlobalCost::kAbsoluteValue ? "global-abs"
                     : g.kind == GlobalCost::kDNorm       ? "global-dnorm"
                                                          : "global-infnorm";
  SatisficingProblem sat{
      "G(v) <= G*(q)", v,
      [g, v](const MixedAction& q) { return global_cost_response(g, v, q); },
      [g, v](std::span<const double> x, const MixedAction& q) {
        return std::max(0.0, global_cost_value(g, x) - global_cost_star(g, v, q));
      },
      {}};
  auto out = build_generalized(std::move(sat));
  out.kind = kind;
  if (g.kind == GlobalCost::kAbsoluteValue) out.utility = values;
  return out;
}

std::vector<double> upper_concave_envelope(std::span<const double> xs,
                                           std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw DimensionError("upper_concave_envelope: mismatched or empty input");
  }
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw ValidationError("upper_concave_envelope: abscissae must increase");
    }
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2], m = hull.back();
      const double cross = (xs[m] - xs[o]) * (ys[i] - ys[o]) - (ys[m] - ys[o]) * (xs[i] - xs[o]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> out(xs.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (seg + 1 < hull.size() && xs[hull[seg + 1]] < xs[i]) ++seg;
    if (seg + 1 >= hull.size()) {
      out[i] = ys[hull.back()];
      continue;
    }
    const std::size_t l = hull[seg], r = hull[seg + 1];
    const double t = (xs[i] - xs[l]) / (xs[r] - xs[l]);
    out[i] = (1.0 - t) * ys[l] + t * ys[r];
  }
  return out;
}

// -- Ratio ---------------------------------------------------------------------

int ratio_response(const ScalarMatrix& u, const ScalarMatrix& c, const MixedAction& q) {
  const auto uq = ActionValues(u, q), cq = ActionValues(c, q);
  int best = 0;
  for (int a = 1; a < u.rows(); ++a) {
    if (uq[a] / cq[a] > uq[best] / cq[best]) best = a;
  }
  return best;
}

double rho_star(const ScalarMatrix& u, const ScalarMatrix& c, const MixedAction& q) {
  const int a = ratio_response(u, c, q);
  const auto uq = ActionValues(u, q), cq = ActionValues(c, q);
  return uq[a] / cq[a];
}

double rho1_at_pure(const ScalarMatrix& u, const ScalarMatrix& c, int z) {
  return rho_star(u, c, MixedAction::Pure(u.cols(), z));
}

ApproachProblem build_ratio(const ScalarMatrix& u, const ScalarMatrix& c) {
  if (u.rows() != c.rows() || u.cols() != c.cols()) {
    throw DimensionError("ratio: utility and cost matrices differ in shape");
  }
  for (int a = 0; a < c.rows(); ++a)
    for (int z = 0; z < c.cols(); ++z)
      if (!(c(a, z) > 0.0)) throw ValidationError("ratio: costs must be strictly positive");
  std::vector<double> flat;
  for (int a = 0; a < u.rows(); ++a)
    for (int z = 0; z < u.cols(); ++z) {
      flat.push_back(u(a, z));
      flat.push_back(c(a, z));
    }
  SatisficingProblem sat{
      "u / c >= rho*(q)", VectorGame(u.rows(), u.cols(), 2, std::move(flat)),
      [u, c](const MixedAction& q) {
        return MixedAction::Pure(u.rows(), ratio_response(u, c, q));
      },
      [u, c](std::span<const double> v, const MixedAction& q) {
        if (!(v[1] > 0.0)) return static_cast<double>(INFINITY);
        return std::max(0.0, rho_star(u, c, q) * v[1] - v[0]);
      },
      {{0, +1}}};
  auto out = build_generalized(std::move(sat));
  out.kind = "ratio";
  out.utility = u;
  return out;
}

// -- Constrained -----------------------------------------------------------------

ConstrainedResponse constrained_response(const ScalarMatrix& u, const VectorGame& cost,
                                         const TargetSet& gamma, const MixedAction& q) {
  const auto h = gamma.halfspaces();
  if (!h) throw ValidationError("constraint set must be polyhedral");
  if (cost.dim() != gamma.dim()) throw DimensionError("cost and constraint set dimensions differ");
  const auto uq = ActionValues(u, q);
  const auto cq = CostValues(cost, q);
  const int na = u.rows();

  auto violation = [&](const std::vector<double>& c) {
    double worst = -INFINITY;
    for (std::size_t i = 0; i < h->a.size(); ++i) worst = std::max(worst, dot(h->a[i], c) - h->b[i]);
    return worst;
  };
  const int a_star = ArgMax(uq);
  if (h->a.empty() || violation(cq[a_star]) <= 0.0) {
    return ConstrainedResponse{MixedAction::Pure(na, a_star), uq[a_star]};
  }

  lp::Problem prob;
  prob.num_vars = na;
  prob.objective = uq;
  prob.constraints.push_back({std::vector<double>(na, 1.0), lp::Sense::kEqual, 1.0});
  for (std::size_t i = 0; i < h->a.size(); ++i) {
    std::vector<double> row(na);
    for (int a = 0; a < na; ++a) row[a] = dot(h->a[i], cq[a]);
    prob.constraints.push_back({std::move(row), lp::Sense::kLessEqual, h->b[i]});
  }
  auto sol = lp::Maximize(prob);
  if (sol.status != lp::Status::kOptimal) {
    throw ValidationError("constraint set is infeasible at q=" + format_vector(q.probs()) +
                          ": no agent action keeps the expected cost inside it");
  }
  auto p = MixedAction::Normalized(sol.x);
  return ConstrainedResponse{p, dot(p.probs(), uq)};
}

ApproachProblem build_constrained(const ScalarMatrix& u, const VectorGame& cost,
                                  const TargetSet& gamma) {
  if (cost.n_agent() != u.rows() || cost.n_opp() != u.cols()) {
    throw DimensionError("constrained: utility and cost games differ in shape");
  }
  if (!gamma.halfspaces()) throw ValidationError("constrained: constraint set must be polyhedral");
  if (cost.dim() != gamma.dim()) {
    throw DimensionError("constrained: cost dimension " + std::to_string(cost.dim()) +
                         " does not match the constraint set dimension " +
                         std::to_string(gamma.dim()));
  }
  const int s = cost.dim();
  std::vector<double> flat;
  for (int a = 0; a < u.rows(); ++a)
    for (int z = 0; z < u.cols(); ++z) {
      flat.push_back(u(a, z));
      const auto e = cost.entry(a, z);
      flat.insert(flat.end(), e.begin(), e.end());
    }
  std::vector<RecessionDirection> rec{{0, +1}};
  for (const auto& d : gamma.quadrant_recession()) rec.push_back({d.axis + 1, d.sign});
  SatisficingProblem sat{
      "u >= u*_Gamma(q), c in Gamma", VectorGame(u.rows(), u.cols(), 1 + s, std::move(flat)),
      [u, cost, gamma](const MixedAction& q) {
        return constrained_response(u, cost, gamma, q).p;
      },
      [u, cost, gamma](std::span<const double> v, const MixedAction& q) {
        const double target = constrained_response(u, cost, gamma, q).value;
        return std::max({0.0, target - v[0], distance(gamma, v.subspan(1))});
      },
      std::move(rec)};
  auto out = build_generalized(std::move(sat));
  out.kind = "constrained";
  out.utility = u;
  return out;
}

// -- Generic ---------------------------------------------------------------------

ApproachProblem build_generic_vector(const VectorGame& game, const TargetSet& set,
                                     const GenericResponse& response) {
  if (set.dim() != game.dim()) {
    throw DimensionError("target dimension " + std::to_string(set.dim()) +
                         " does not match payoff dimension " + std::to_string(game.dim()));
  }
  ResponseOracle oracle;
  if (response.rule == GenericResponse::Rule::kFixed) {
    if (static_cast<int>(response.p.size()) != game.n_agent()) {
      throw ValidationError("fixed response has " + std::to_string(response.p.size()) +
                            " entries, the game has " + std::to_string(game.n_agent()) +
                            " agent actions");
    }
    MixedAction p(response.p);
    oracle = {"fixed", [p](const MixedAction&) { return p; }};
  } else {
    const auto h = set.halfspaces();
    if (!h) throw ValidationError("the lp response rule needs a polyhedral target");
    oracle = {"lp", [game, h = *h](const MixedAction& q) {
                const int na = game.n_agent();
                lp::Problem prob;
                prob.num_vars = na + 1;
                prob.objective.assign(na + 1, 0.0);
                prob.objective[na] = -1.0;
                prob.free.assign(na + 1, false);
                prob.free[na] = true;
                std::vector<double> ones(na + 1, 1.0);
                ones[na] = 0.0;
                prob.constraints.push_back({ones, lp::Sense::kEqual, 1.0});
                std::vector<std::vector<double>> rq(na);
                for (int a = 0; a < na; ++a) rq[a] = expected_reward(game, MixedAction::Pure(na, a), q);
                for (std::size_t i = 0; i < h.a.size(); ++i) {
                  std::vector<double> row(na + 1);
                  for (int a = 0; a < na; ++a) row[a] = dot(h.a[i], rq[a]);
                  row[na] = -1.0;
                  prob.constraints.push_back({std::move(row), lp::Sense::kLessEqual, h.b[i]});
                }
                auto sol = lp::Maximize(prob);
                if (sol.status != lp::Status::kOptimal || sol.x[na] > 1e-9) {
                  throw ValidationError("target is not reachable against q=" +
                                        format_vector(q.probs()) +
                                        ": no agent action puts r(p, q) in the set");
                }
                sol.x.resize(na);
                return MixedAction::Normalized(std::move(sol.x));
              }};
  }
  return ApproachProblem{"generic-vector", game, Target(set), std::move(oracle), std::nullopt};
}

}  // namespace rba
