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

#include <cmath>
#include <random>

#include "doctest.h"
#include "rba/errors.h"
#include "rba/regret.h"

using namespace rba;

namespace {

const ScalarMatrix kU = ScalarMatrix::FromRows({{0, 1}, {2, 3}});

ScalarMatrix RandomMatrix(std::mt19937_64& gen, int rows, int cols, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  ScalarMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(gen);
  return m;
}

MixedAction RandomMixed(std::mt19937_64& gen, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  for (double& x : w) x = e(gen);
  return MixedAction::Normalized(w);
}

// Regular grid on the simplex over two or three actions.
std::vector<MixedAction> SimplexGrid(int na, int steps) {
  std::vector<MixedAction> out;
  if (na == 2) {
    for (int i = 0; i <= steps; ++i) out.push_back(MixedAction::Normalized({double(i), double(steps - i)}));
    return out;
  }
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j)
      out.push_back(MixedAction::Normalized({double(i), double(j), double(steps - i - j)}));
  return out;
}

double Mixed(const ScalarMatrix& m, const MixedAction& p, const MixedAction& q) {
  double s = 0.0;
  for (int a = 0; a < m.rows(); ++a)
    for (int z = 0; z < m.cols(); ++z) s += p[a] * q[z] * m(a, z);
  return s;
}

}  // namespace

TEST_CASE("external regret examples") {
  const History h{{MixedAction::Pure(2, 0), 0, 0}};
  const auto l = external_regret(h, kU);
  CHECK(l[0] == 0.0);
  CHECK(l[1] == 2.0);

  // Always playing the hindsight-best action against a constant z.
  History best;
  for (int k = 0; k < 5; ++k) best.push_back({MixedAction::Pure(2, 1), 1, 0});
  for (double x : external_regret(best, kU)) CHECK(x <= 0.0);

  const History smooth{{MixedAction({0.5, 0.5}), 0, 1}};
  const auto ls = external_regret(smooth, kU, true);
  CHECK(ls[0] == doctest::Approx(1.0 - 2.0));
  CHECK(ls[1] == doctest::Approx(3.0 - 2.0));
}

TEST_CASE("regret matching") {
  const std::vector<double> l{0.5, -0.2, 0.3};
  const MixedAction p = regret_matching_policy(l);
  CHECK(p[0] == doctest::Approx(0.625));
  CHECK(p[1] == 0.0);
  CHECK(p[2] == doctest::Approx(0.375));
  const std::vector<double> neg{-1.0, 0.0, -0.5};
  CHECK(regret_matching_policy(neg) == MixedAction::Uniform(3));
  const std::vector<double> one{1.0, 0.0};
  CHECK(regret_matching_policy(one) == MixedAction::Pure(2, 0));
}

TEST_CASE("internal regret examples") {
  const History h{{MixedAction::Pure(2, 0), 0, 0}};
  const auto i = internal_regret(h, kU);
  CHECK(i[0][1] == 2.0);
  CHECK(i[0][0] == 0.0);
  CHECK(i[1][0] == 0.0);
  CHECK(i[1][1] == 0.0);

  const ScalarMatrix u3 = ScalarMatrix::FromRows({{1, 0}, {0, 1}, {2, 2}});
  const History h3{{MixedAction::Pure(3, 0), 0, 1}, {MixedAction::Pure(3, 1), 1, 0}};
  const auto i3 = internal_regret(h3, u3);
  for (double x : i3[2]) CHECK(x == 0.0);
}

TEST_CASE("external regret game") {
  const ScalarMatrix pennies = ScalarMatrix::FromRows({{1, -1}, {-1, 1}});
  const ApproachProblem problem = build_external_game(pennies);
  CHECK(problem.kind == "external");
  const MixedAction q = MixedAction::Uniform(2);
  const auto r = certify_response(problem, q);
  for (double x : r) CHECK(x == doctest::Approx(0.0));
  for (int a = 0; a < 2; ++a) {
    for (double x : expected_reward(problem.game, MixedAction::Pure(2, a), q))
      CHECK(x == doctest::Approx(0.0));
  }
}

TEST_CASE("blackwell embedding target point") {
  const ApproachProblem problem = build_blackwell_embedding(kU);
  const MixedAction q({0.5, 0.5});
  CHECK(problem.oracle.respond(q) == MixedAction::Pure(2, 1));
  const auto r = certify_response(problem, q);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(2.5));
  CHECK(r[1] == doctest::Approx(0.5));
  CHECK(r[2] == doctest::Approx(0.5));
  // A q-block off the simplex has no defined membership.
  const std::vector<double> off{10.0, 0.7, 0.7};
  CHECK(std::isinf(problem.target.violation(off)));
  CHECK_FALSE(stacked_distribution(off, 1).has_value());
  const std::vector<double> low{2.0, 0.5, 0.5};
  CHECK(problem.target.violation(low) == doctest::Approx(0.5));
}

TEST_CASE("internal regret game") {
  std::mt19937_64 gen(3);
  const ScalarMatrix u = RandomMatrix(gen, 3, 4, -1, 1);
  const ApproachProblem problem = build_internal_game(u);
  CHECK(problem.game.dim() == 9);
  for (int t = 0; t < 50; ++t) CHECK_NOTHROW(certify_response(problem, RandomMixed(gen, 4)));
}

TEST_CASE("global cost responses") {
  const GlobalCostSpec inf{GlobalCost::kInfNorm, 2.0};
  const VectorGame lb = load_balancing_payoff(ScalarMatrix::FromRows({{1}, {2}}));
  const MixedAction q = MixedAction::Pure(1, 0);
  const MixedAction p = global_cost_response(inf, lb, q);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0));
  CHECK(global_cost_star(inf, lb, q) == doctest::Approx(2.0 / 3.0));

  const GlobalCostSpec abs{GlobalCost::kAbsoluteValue, 2.0};
  const VectorGame mixed = VectorGame::FromScalar(ScalarMatrix::FromRows({{2}, {-1}}));
  const MixedAction pa = global_cost_response(abs, mixed, q);
  CHECK(pa[0] == doctest::Approx(1.0 / 3.0));
  CHECK(pa[1] == doctest::Approx(2.0 / 3.0));
  CHECK(global_cost_star(abs, mixed, q) == doctest::Approx(0.0));

  const VectorGame pos = VectorGame::FromScalar(ScalarMatrix::FromRows({{2}, {3}}));
  CHECK(global_cost_response(abs, pos, q) == MixedAction::Pure(2, 0));
  CHECK(global_cost_star(abs, pos, q) == doctest::Approx(2.0));
}

TEST_CASE("global cost responses match grid search") {
  std::mt19937_64 gen(8);
  for (GlobalCost kind : {GlobalCost::kInfNorm, GlobalCost::kDNorm, GlobalCost::kAbsoluteValue}) {
    const GlobalCostSpec g{kind, 2.0};
    const auto grid = SimplexGrid(3, 120);
    for (int t = 0; t < 10; ++t) {
      const bool abs = kind == GlobalCost::kAbsoluteValue;
      const ScalarMatrix m = RandomMatrix(gen, 3, 2, abs ? -1.0 : 0.1, 2.0);
      const VectorGame v = abs ? VectorGame::FromScalar(m) : load_balancing_payoff(m);
      const MixedAction q = RandomMixed(gen, 2);
      double grid_best = INFINITY;
      for (const auto& p : grid) {
        grid_best = std::min(grid_best, global_cost_value(g, expected_reward(v, p, q)));
      }
      const double star = global_cost_star(g, v, q);
      const MixedAction p = global_cost_response(g, v, q);
      CHECK(global_cost_value(g, expected_reward(v, p, q)) == doctest::Approx(star).epsilon(1e-9));
      CHECK(star <= grid_best + 1e-12);
      CHECK(star >= grid_best - 0.05);
    }
  }
}

TEST_CASE("global problems are certified") {
  std::mt19937_64 gen(9);
  const ScalarMatrix loss = ScalarMatrix::FromRows({{1, 2}, {2, 1}, {1.5, 1.5}});
  for (GlobalCost kind : {GlobalCost::kInfNorm, GlobalCost::kDNorm}) {
    const ApproachProblem problem = build_global({kind, 2.0}, loss);
    for (int t = 0; t < 30; ++t) CHECK_NOTHROW(certify_response(problem, RandomMixed(gen, 2)));
  }
  const ApproachProblem abs =
      build_global({GlobalCost::kAbsoluteValue, 2.0},
                   ScalarMatrix::FromRows({{2, -1, 1}, {-1, 3, -2}}));
  CHECK(abs.kind == "global-abs");
  for (int t = 0; t < 30; ++t) CHECK_NOTHROW(certify_response(abs, RandomMixed(gen, 3)));
}

TEST_CASE("upper concave envelope") {
  const std::vector<double> xs{0, 1, 2, 3};
  const std::vector<double> ys{0, -1, 2, 0};
  const auto env = upper_concave_envelope(xs, ys);
  CHECK(env[0] == doctest::Approx(0.0));
  CHECK(env[1] == doctest::Approx(1.0));
  CHECK(env[2] == doctest::Approx(2.0));
  CHECK(env[3] == doctest::Approx(0.0));
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> x(50), y(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = i;
    y[i] = u(gen);
  }
  const auto e = upper_concave_envelope(x, y);
  for (int i = 0; i < 50; ++i) CHECK(e[i] >= y[i] - 1e-12);
  for (int i = 1; i + 1 < 50; ++i) CHECK(e[i] >= 0.5 * (e[i - 1] + e[i + 1]) - 1e-12);
}

TEST_CASE("ratio responses") {
  const ScalarMatrix u = ScalarMatrix::FromRows({{3}, {1}});
  const ScalarMatrix c = ScalarMatrix::FromRows({{2}, {1}});
  const MixedAction dz = MixedAction::Pure(1, 0);
  CHECK(ratio_response(u, c, dz) == 0);
  CHECK(rho_star(u, c, dz) == doctest::Approx(1.5));
  CHECK(rho1_at_pure(u, c, 0) == doctest::Approx(1.5));
  CHECK(rho1_at_pure(u, u, 0) == doctest::Approx(1.0));
  const ScalarMatrix single_u = ScalarMatrix::FromRows({{0.6, 0.3}});
  const ScalarMatrix single_c = ScalarMatrix::FromRows({{1.2, 2.0}});
  CHECK(rho1_at_pure(single_u, single_c, 1) == doctest::Approx(0.15));

  std::mt19937_64 gen(4);
  const ScalarMatrix ones(3, 3, 1.0);
  for (int t = 0; t < 10; ++t) {
    const ScalarMatrix uu = RandomMatrix(gen, 3, 3, -1, 1);
    const MixedAction q = RandomMixed(gen, 3);
    CHECK(ratio_response(uu, ones, q) == best_response(uu, q));
  }
}

TEST_CASE("ratio response is optimal on a simplex grid") {
  std::mt19937_64 gen(6);
  const auto grid = SimplexGrid(3, 199);
  for (int t = 0; t < 10; ++t) {
    const ScalarMatrix u = RandomMatrix(gen, 3, 3, 0, 1);
    const ScalarMatrix c = RandomMatrix(gen, 3, 3, 1, 2);
    const MixedAction q = RandomMixed(gen, 3);
    double best = -INFINITY;
    for (const auto& p : grid) best = std::max(best, Mixed(u, p, q) / Mixed(c, p, q));
    const MixedAction pa = MixedAction::Pure(3, ratio_response(u, c, q));
    CHECK(Mixed(u, pa, q) / Mixed(c, pa, q) >= best - 1e-9);
    CHECK(rho_star(u, c, q) == doctest::Approx(Mixed(u, pa, q) / Mixed(c, pa, q)));
  }
}

TEST_CASE("ratio problem requires positive costs") {
  const ScalarMatrix u = ScalarMatrix::FromRows({{1, 0}, {0, 1}});
  CHECK_THROWS_AS(build_ratio(u, ScalarMatrix::FromRows({{1, 0}, {1, 1}})), ValidationError);
  const ApproachProblem p = build_ratio(u, ScalarMatrix::FromRows({{1, 2}, {2, 1}}));
  CHECK(p.game.dim() == 4);
  CHECK_NOTHROW(certify_response(p, MixedAction({0.3, 0.7})));
}

TEST_CASE("constrained responses") {
  const ScalarMatrix u = ScalarMatrix::FromRows({{1}, {0}});
  const VectorGame cost = VectorGame::FromScalar(ScalarMatrix::FromRows({{1}, {0}}));
  const TargetSet gamma = TargetSet::HPolyhedron({{1.0}}, {0.5});
  const auto r = constrained_response(u, cost, gamma, MixedAction::Pure(1, 0));
  CHECK(r.p[0] == doctest::Approx(0.5));
  CHECK(r.p[1] == doctest::Approx(0.5));
  CHECK(r.value == doctest::Approx(0.5));

  // Without an active constraint the classical best response is kept.
  std::mt19937_64 gen(12);
  const TargetSet everything = TargetSet::HPolyhedron({{1.0}}, {100.0});
  for (int t = 0; t < 10; ++t) {
    const ScalarMatrix uu = RandomMatrix(gen, 3, 2, -1, 1);
    const VectorGame cc = VectorGame::FromScalar(RandomMatrix(gen, 3, 2, 0, 1));
    const MixedAction q = RandomMixed(gen, 2);
    const auto res = constrained_response(uu, cc, everything, q);
    CHECK(res.value == doctest::Approx(best_reward(uu, q)));
  }

  const TargetSet tight = TargetSet::HPolyhedron({{1.0}}, {-0.5});
  CHECK_THROWS_AS(constrained_response(u, cost, tight, MixedAction::Pure(1, 0)), ValidationError);
}

TEST_CASE("constrained response matches grid search") {
  std::mt19937_64 gen(13);
  const auto grid = SimplexGrid(3, 150);
  const TargetSet gamma = TargetSet::HPolyhedron({{1.0}}, {0.5});
  for (int t = 0; t < 10; ++t) {
    const ScalarMatrix u = RandomMatrix(gen, 3, 2, 0, 1);
    ScalarMatrix c = RandomMatrix(gen, 3, 2, 0, 1);
    c(1, 0) = 0.1;
    c(1, 1) = 0.2;  // keeps the constraint feasible
    const VectorGame cost = VectorGame::FromScalar(c);
    const MixedAction q = RandomMixed(gen, 2);
    double best = -INFINITY;
    for (const auto& p : grid) {
      if (Mixed(c, p, q) <= 0.5) best = std::max(best, Mixed(u, p, q));
    }
    const auto res = constrained_response(u, cost, gamma, q);
    CHECK(Mixed(c, res.p, q) <= 0.5 + 1e-9);
    CHECK(res.value == doctest::Approx(Mixed(u, res.p, q)));
    CHECK(res.value >= best - 1e-9);
    CHECK(res.value <= best + 0.02);
  }
}

TEST_CASE("generic vector responses") {
  const VectorGame axes({{{1, 0}, {0, 1}}, {{-1, 0}, {0, -1}}});
  const ApproachProblem fixed = build_generic_vector(
      axes, TargetSet::Ball({0, 0}, 0.25), {GenericResponse::Rule::kFixed, {0.5, 0.5}});
  CHECK(fixed.oracle.respond(MixedAction({0.9, 0.1})) == MixedAction({0.5, 0.5}));
  CHECK_THROWS_AS(build_generic_vector(axes, TargetSet::Ball({0, 0}, 0.25),
                                       {GenericResponse::Rule::kLp, {}}),
                  ValidationError);

  const ApproachProblem lp = build_generic_vector(
      axes, TargetSet::HPolyhedron({{1, 0}, {0, 1}}, {0, 0}), {GenericResponse::Rule::kLp, {}});
  std::mt19937_64 gen(14);
  for (int t = 0; t < 20; ++t) CHECK_NOTHROW(certify_response(lp, RandomMixed(gen, 2)));

  const ApproachProblem unreachable = build_generic_vector(
      axes, TargetSet::HPolyhedron({{1, 0}}, {-2}), {GenericResponse::Rule::kLp, {}});
  CHECK_THROWS_AS(unreachable.oracle.respond(MixedAction({0.5, 0.5})), ValidationError);
}
