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
#include "rba/lp.h"

using namespace rba;
using lp::Sense;
using lp::Status;

namespace {

// Maximizes c.x over {x >= 0, a x <= b} in two variables by enumerating all
// vertices (intersections of pairs of tight constraints).
double VertexEnumeration(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                         const std::vector<double>& c) {
  std::vector<std::vector<double>> rows = a;
  std::vector<double> rhs = b;
  rows.push_back({-1, 0});
  rhs.push_back(0);
  rows.push_back({0, -1});
  rhs.push_back(0);
  double best = -INFINITY;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (rhs[i] * rows[j][1] - rows[i][1] * rhs[j]) / det;
      const double y = (rows[i][0] * rhs[j] - rhs[i] * rows[j][0]) / det;
      bool ok = true;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        ok = ok && rows[k][0] * x + rows[k][1] * y <= rhs[k] + 1e-9;
      }
      if (ok) best = std::max(best, c[0] * x + c[1] * y);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("textbook maximization") {
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {3, 5};
  p.constraints = {{{1, 0}, Sense::kLessEqual, 4},
                   {{0, 2}, Sense::kLessEqual, 12},
                   {{3, 2}, Sense::kLessEqual, 18}};
  auto s = lp::Maximize(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(36));
  CHECK(s.x[0] == doctest::Approx(2));
  CHECK(s.x[1] == doctest::Approx(6));
}

TEST_CASE("infeasible and unbounded") {
  lp::Problem p;
  p.num_vars = 1;
  p.objective = {1};
  p.constraints = {{{1}, Sense::kLessEqual, 1}, {{1}, Sense::kGreaterEqual, 2}};
  CHECK(lp::Maximize(p).status == Status::kInfeasible);
  p.constraints = {{{1}, Sense::kGreaterEqual, 2}};
  CHECK(lp::Maximize(p).status == Status::kUnbounded);
}

TEST_CASE("free variables and equalities") {
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {-1, 0};
  p.free = {true, true};
  p.constraints = {{{1, 1}, Sense::kEqual, -3}, {{0, 1}, Sense::kLessEqual, 1}};
  auto s = lp::Maximize(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.x[0] == doctest::Approx(-4));
  CHECK(s.objective == doctest::Approx(4));
}

TEST_CASE("cycling example terminates") {
  lp::Problem p;
  p.num_vars = 4;
  p.objective = {0.75, -150, 0.02, -6};
  p.constraints = {{{0.25, -60, -0.04, 9}, Sense::kLessEqual, 0},
                   {{0.5, -90, -0.02, 3}, Sense::kLessEqual, 0},
                   {{0, 0, 1, 0}, Sense::kLessEqual, 1}};
  auto s = lp::Maximize(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(0.05));
}

TEST_CASE("random two-variable programs match vertex enumeration") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i = 0; i < 4; ++i) {
      a.push_back({u(gen), u(gen)});
      b.push_back(0.2 + std::abs(u(gen)));
    }
    a.push_back({1, 1});
    b.push_back(5);  // keeps the region bounded
    std::vector<double> c = {u(gen), u(gen)};
    lp::Problem p;
    p.num_vars = 2;
    p.objective = c;
    for (std::size_t i = 0; i < a.size(); ++i) p.constraints.push_back({a[i], Sense::kLessEqual, b[i]});
    auto s = lp::Maximize(p);
    REQUIRE(s.status == Status::kOptimal);
    CHECK(s.objective == doctest::Approx(VertexEnumeration(a, b, c)).epsilon(1e-9));
  }
}
