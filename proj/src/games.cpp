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

#include "rba/games.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rba/errors.h"

namespace rba {

// -- MixedAction --------------------------------------------------------------

MixedAction::MixedAction(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("mixed action over an empty action set");
  double total = 0.0;
  for (double x : probs_) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError("mixed action has a negative or non-finite entry: " +
                            format_vector(probs_));
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    throw ValidationError("mixed action does not sum to one: " + format_vector(probs_));
  }
}

MixedAction MixedAction::Uniform(int num_actions) {
  if (num_actions < 1) throw ValidationError("uniform action over an empty set");
  return MixedAction(std::vector<double>(num_actions, 1.0 / num_actions));
}

MixedAction MixedAction::Pure(int num_actions, int action) {
  if (action < 0 || action >= num_actions) {
    throw ValidationError("pure action index " + std::to_string(action) +
                          " out of range [0, " + std::to_string(num_actions) + ")");
  }
  std::vector<double> probs(num_actions, 0.0);
  probs[action] = 1.0;
  return MixedAction(std::move(probs));
}

MixedAction MixedAction::Normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double& w : weights) {
    if (!std::isfinite(w)) throw ValidationError("non-finite weight in mixed action");
    w = std::max(w, 0.0);
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("mixed action weights have no positive mass");
  for (double& w : weights) w /= total;
  return MixedAction(std::move(weights));
}

// -- ScalarMatrix -------------------------------------------------------------

ScalarMatrix ScalarMatrix::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ValidationError("empty matrix");
  ScalarMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(rows[r].size()) != m.cols()) {
      throw ValidationError("ragged matrix: row " + std::to_string(r) + " has " +
                            std::to_string(rows[r].size()) + " entries, expected " +
                            std::to_string(m.cols()));
    }
    for (int c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(rows[r][c])) throw ValidationError("non-finite matrix entry");
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

std::vector<std::vector<double>> ScalarMatrix::ToRows() const {
  std::vector<std::vector<double>> out(rows_);
  for (int r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

// -- VectorGame ---------------------------------------------------------------

VectorGame::VectorGame(const std::vector<std::vector<std::vector<double>>>& payoff) {
  if (payoff.empty() || payoff.front().empty() || payoff.front().front().empty()) {
    throw ValidationError("payoff tensor must have at least one action per side and dim >= 1");
  }
  n_agent_ = static_cast<int>(payoff.size());
  n_opp_ = static_cast<int>(payoff.front().size());
  dim_ = static_cast<int>(payoff.front().front().size());
  payoff_.reserve(static_cast<std::size_t>(n_agent_) * n_opp_ * dim_);
  for (int a = 0; a < n_agent_; ++a) {
    if (static_cast<int>(payoff[a].size()) != n_opp_) {
      throw ValidationError("payoff tensor row " + std::to_string(a) +
                            " has the wrong number of opponent actions");
    }
    for (int z = 0; z < n_opp_; ++z) {
      if (static_cast<int>(payoff[a][z].size()) != dim_) {
        throw ValidationError("payoff entry (" + std::to_string(a) + ", " +
                              std::to_string(z) + ") has the wrong dimension");
      }
      payoff_.insert(payoff_.end(), payoff[a][z].begin(), payoff[a][z].end());
    }
  }
  Validate();
}

VectorGame::VectorGame(int n_agent, int n_opp, int dim, std::vector<double> flat)
    : n_agent_(n_agent), n_opp_(n_opp), dim_(dim), payoff_(std::move(flat)) {
  if (n_agent_ < 1 || n_opp_ < 1 || dim_ < 1) {
    throw ValidationError("game needs n_agent, n_opp, dim >= 1");
  }
  if (payoff_.size() != static_cast<std::size_t>(n_agent_) * n_opp_ * dim_) {
    throw ValidationError("flat payoff has the wrong size");
  }
  Validate();
}

VectorGame VectorGame::FromScalar(const ScalarMatrix& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int a = 0; a < m.rows(); ++a) {
    for (int z = 0; z < m.cols(); ++z) flat.push_back(m(a, z));
  }
  return VectorGame(m.rows(), m.cols(), 1, std::move(flat));
}

void VectorGame::Validate() {
  for (double x : payoff_) {
    if (!std::isfinite(x)) throw ValidationError("payoff tensor has a non-finite entry");
  }
  rho_ = span(*this);
}

std::vector<std::vector<std::vector<double>>> VectorGame::ToNested() const {
  std::vector<std::vector<std::vector<double>>> out(
      n_agent_, std::vector<std::vector<double>>(n_opp_));
  for (int a = 0; a < n_agent_; ++a) {
    for (int z = 0; z < n_opp_; ++z) {
      auto e = entry(a, z);
      out[a][z].assign(e.begin(), e.end());
    }
  }
  return out;
}

// -- Operations ---------------------------------------------------------------

double span(const VectorGame& game) {
  const int cells = game.n_agent() * game.n_opp();
  double best_sq = 0.0;
  for (int i = 0; i < cells; ++i) {
    auto x = game.entry(i / game.n_opp(), i % game.n_opp());
    for (int j = i + 1; j < cells; ++j) {
      auto y = game.entry(j / game.n_opp(), j % game.n_opp());
      double sq = 0.0;
      for (int k = 0; k < game.dim(); ++k) sq += (x[k] - y[k]) * (x[k] - y[k]);
      best_sq = std::max(best_sq, sq);
    }
  }
  return std::sqrt(best_sq);
}

std::vector<double> expected_reward(const VectorGame& game, const MixedAction& p,
                                    const MixedAction& q) {
  if (p.size() != game.n_agent() || q.size() != game.n_opp()) {
    throw DimensionError("expected_reward: mixed actions of size (" +
                         std::to_string(p.size()) + ", " + std::to_string(q.size()) +
                         ") for a " + std::to_string(game.n_agent()) + "x" +
                         std::to_string(game.n_opp()) + " game");
  }
  std::vector<double> out(game.dim(), 0.0);
  for (int a = 0; a < game.n_agent(); ++a) {
    if (p[a] == 0.0) continue;
    for (int z = 0; z < game.n_opp(); ++z) {
      const double w = p[a] * q[z];
      if (w == 0.0) continue;
      auto e = game.entry(a, z);
      for (int k = 0; k < game.dim(); ++k) out[k] += w * e[k];
    }
  }
  return out;
}

std::vector<double> reward_against(const VectorGame& game, const MixedAction& p, int z) {
  if (p.size() != game.n_agent() || z < 0 || z >= game.n_opp()) {
    throw DimensionError("reward_against: action out of range");
  }
  std::vector<double> out(game.dim(), 0.0);
  for (int a = 0; a < game.n_agent(); ++a) {
    if (p[a] == 0.0) continue;
    auto e = game.entry(a, z);
    for (int k = 0; k < game.dim(); ++k) out[k] += p[a] * e[k];
  }
  return out;
}

ScalarMatrix project_game(const VectorGame& game, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != game.dim()) {
    throw DimensionError("project_game: direction has dimension " +
                         std::to_string(lambda.size()) + ", game has " +
                         std::to_string(game.dim()));
  }
  ScalarMatrix m(game.n_agent(), game.n_opp());
  for (int a = 0; a < game.n_agent(); ++a) {
    for (int z = 0; z < game.n_opp(); ++z) m(a, z) = dot(lambda, game.entry(a, z));
  }
  return m;
}

namespace {

// Column player's LP for a matrix with entries >= 1:
//   max sum_z y_z  s.t.  sum_z M[a][z] y_z <= 1 for every row a,  y >= 0.
// The origin is feasible, so no phase 1 is needed. Pivots follow Bland's rule.
// On return y holds the primal solution and x the duals (row weights).
struct GameTableau {
  int m;  // rows = agent actions
  int n;  // structural columns = opponent actions
  int width;
  std::vector<double> t;      // m rows of [n structurals | m slacks | rhs]
  std::vector<double> cost;   // reduced gains, length n + m
  std::vector<int> basis;     // variable index basic in each row

  explicit GameTableau(const ScalarMatrix& shifted)
      : m(shifted.rows()), n(shifted.cols()), width(shifted.cols() + shifted.rows() + 1),
        t(static_cast<std::size_t>(m) * width, 0.0), cost(n + m, 0.0), basis(m) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) at(i, j) = shifted(i, j);
      at(i, n + i) = 1.0;
      at(i, width - 1) = 1.0;
      basis[i] = n + i;
    }
    for (int j = 0; j < n; ++j) cost[j] = 1.0;
  }

  double& at(int i, int j) { return t[static_cast<std::size_t>(i) * width + j]; }

  void Pivot(int row, int col) {
    const double inv = 1.0 / at(row, col);
    for (int j = 0; j < width; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    const double f = cost[col];
    if (f != 0.0) {
      for (int j = 0; j < n + m; ++j) cost[j] -= f * at(row, j);
      cost[col] = 0.0;
    }
    basis[row] = col;
  }

  // Returns false if the iteration cap is hit.
  bool Solve() {
    constexpr double kEps = 1e-12;
    const int cap = 200 * (n + m) + 1000;
    for (int iter = 0; iter < cap; ++iter) {
      int enter = -1;
      for (int j = 0; j < n + m; ++j) {
        if (cost[j] > kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = at(i, enter);
        if (a <= kEps) continue;
        const double ratio = at(i, width - 1) / a;
        if (leave < 0 || ratio < best - 1e-15 ||
            (ratio <= best + 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      // Every column of a matrix with entries >= 1 is bounded.
      if (leave < 0) return false;
      Pivot(leave, enter);
    }
    return false;
  }
};

}  // namespace

SaddlePoint solve_zero_sum(const ScalarMatrix& m) {
  if (m.rows() < 1 || m.cols() < 1) throw DimensionError("solve_zero_sum: empty matrix");
  double scale = 0.0;
  for (int a = 0; a < m.rows(); ++a) {
    for (int z = 0; z < m.cols(); ++z) {
      if (!std::isfinite(m(a, z))) throw ValidationError("solve_zero_sum: non-finite entry");
      scale = std::max(scale, std::abs(m(a, z)));
    }
  }
  if (scale == 0.0) {
    return SaddlePoint{MixedAction::Uniform(m.rows()), MixedAction::Uniform(m.cols()), 0.0};
  }

  // Scale to [-1, 1] and shift to [1, 3]; strategies are invariant under both.
  constexpr double kShift = 2.0;
  ScalarMatrix shifted(m.rows(), m.cols());
  for (int a = 0; a < m.rows(); ++a) {
    for (int z = 0; z < m.cols(); ++z) shifted(a, z) = m(a, z) / scale + kShift;
  }
  GameTableau tab(shifted);
  if (!tab.Solve()) {
    throw SolverError("solve_zero_sum: simplex did not converge on a " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " game");
  }

  std::vector<double> y(m.cols(), 0.0);
  for (int i = 0; i < tab.m; ++i) {
    if (tab.basis[i] < tab.n) y[tab.basis[i]] = tab.at(i, tab.width - 1);
  }
  std::vector<double> x(m.rows(), 0.0);
  for (int a = 0; a < m.rows(); ++a) x[a] = -tab.cost[tab.n + a];

  SaddlePoint sp{MixedAction::Normalized(std::move(x)), MixedAction::Normalized(std::move(y)),
                 0.0};
  // Value from the two one-sided guarantees of the recovered strategies.
  double lower = INFINITY;
  for (int z = 0; z < m.cols(); ++z) {
    double s = 0.0;
    for (int a = 0; a < m.rows(); ++a) s += sp.p[a] * m(a, z);
    lower = std::min(lower, s);
  }
  double upper = -INFINITY;
  for (int a = 0; a < m.rows(); ++a) {
    double s = 0.0;
    for (int z = 0; z < m.cols(); ++z) s += m(a, z) * sp.q[z];
    upper = std::max(upper, s);
  }
  sp.value = 0.5 * (lower + upper);
  if (upper - lower > 2.0 * kCertificateTol) {
    std::ostringstream msg;
    msg << "solve_zero_sum: saddle certificate gap " << (upper - lower) << " on a "
        << m.rows() << "x" << m.cols() << " game (p=" << format_vector(sp.p.probs())
        << ", q=" << format_vector(sp.q.probs()) << ")";
    throw SolverError(msg.str());
  }
  return sp;
}

bool check_saddle_certificate(const ScalarMatrix& m, const SaddlePoint& sp, double tol) {
  for (int z = 0; z < m.cols(); ++z) {
    double s = 0.0;
    for (int a = 0; a < m.rows(); ++a) s += sp.p[a] * m(a, z);
    if (s < sp.value - tol) return false;
  }
  for (int a = 0; a < m.rows(); ++a) {
    double s = 0.0;
    for (int z = 0; z < m.cols(); ++z) s += m(a, z) * sp.q[z];
    if (s > sp.value + tol) return false;
  }
  return true;
}

int sample_action(const MixedAction& p, Rng& rng) {
  const double u = rng.Uniform();
  double cumulative = 0.0;
  int last_positive = 0;
  for (int a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    last_positive = a;
    cumulative += p[a];
    if (u < cumulative) return a;
  }
  // Rounding left the cumulative sum just below u.
  return last_positive;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

std::string format_vector(std::span<const double> x) {
  std::ostringstream out;
  out.precision(10);
  out << "(";
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i];
  out << ")";
  return out.str();
}

}  // namespace rba
