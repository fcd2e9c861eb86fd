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

#include "rba/lp.h"

#include <cmath>
#include <string>

#include "rba/errors.h"

namespace rba::lp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kFeasEps = 1e-9;

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), width_(cols + 1),
        t_(static_cast<std::size_t>(rows) * (cols + 1), 0.0), basis_(rows, -1),
        gain_(cols, 0.0), allowed_(cols, true) {}

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  double& rhs(int i) { return at(i, cols_); }
  std::vector<int>& basis() { return basis_; }
  std::vector<bool>& allowed() { return allowed_; }

  // Sets the objective (maximize c . x) and prices out the current basis.
  void SetObjective(const std::vector<double>& c) {
    gain_ = c;
    value_ = 0.0;
    for (int i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols_; ++j) gain_[j] -= cb * at(i, j);
      value_ += cb * rhs(i);
    }
  }

  double value() const { return value_; }

  void Pivot(int row, int col) {
    const double inv = 1.0 / at(row, col);
    for (int j = 0; j <= cols_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    const double f = gain_[col];
    if (f != 0.0) {
      for (int j = 0; j < cols_; ++j) gain_[j] -= f * at(row, j);
      value_ += f * rhs(row);
      gain_[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Runs primal simplex iterations. Returns kOptimal or kUnbounded.
  Status Run() {
    const int cap = 500 * (rows_ + cols_) + 1000;
    for (int iter = 0; iter < cap; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (allowed_[j] && gain_[j] > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::kOptimal;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(i) / a;
        if (leave < 0 || ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return Status::kUnbounded;
      Pivot(leave, enter);
    }
    throw SolverError("lp: simplex iteration cap reached (" + std::to_string(rows_) +
                      " rows, " + std::to_string(cols_) + " columns)");
  }

 private:
  int rows_;
  int cols_;
  int width_;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<double> gain_;
  std::vector<bool> allowed_;
  double value_ = 0.0;
};

}  // namespace

Solution Maximize(const Problem& problem) {
  const int nv = problem.num_vars;
  if (static_cast<int>(problem.objective.size()) != nv) {
    throw DimensionError("lp: objective size does not match num_vars");
  }
  const bool any_free = !problem.free.empty();
  if (any_free && static_cast<int>(problem.free.size()) != nv) {
    throw DimensionError("lp: free flags size does not match num_vars");
  }

  // Column layout: [x+ (nv) | x- (free vars) | slack/surplus | artificial].
  std::vector<int> neg_col(nv, -1);
  int cols = nv;
  for (int v = 0; v < nv; ++v) {
    if (any_free && problem.free[v]) neg_col[v] = cols++;
  }
  const int m = static_cast<int>(problem.constraints.size());
  std::vector<int> slack_col(m, -1);
  std::vector<int> art_col(m, -1);
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    if (static_cast<int>(c.coeffs.size()) != nv) {
      throw DimensionError("lp: constraint " + std::to_string(i) + " has the wrong size");
    }
    if (c.sense != Sense::kEqual) slack_col[i] = cols++;
  }
  const int first_art = cols;
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    sign[i] = c.rhs < 0.0 ? -1.0 : 1.0;
    // Rows whose slack enters with coefficient +1 after sign normalization can
    // start basic on the slack; the rest need an artificial.
    const bool slack_basic = c.sense != Sense::kEqual &&
                             ((c.sense == Sense::kLessEqual) == (sign[i] > 0.0));
    if (!slack_basic) art_col[i] = cols++;
  }

  Tableau tab(m, cols);
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    for (int v = 0; v < nv; ++v) {
      tab.at(i, v) = sign[i] * c.coeffs[v];
      if (neg_col[v] >= 0) tab.at(i, neg_col[v]) = -sign[i] * c.coeffs[v];
    }
    if (slack_col[i] >= 0) {
      tab.at(i, slack_col[i]) = sign[i] * (c.sense == Sense::kLessEqual ? 1.0 : -1.0);
    }
    tab.rhs(i) = sign[i] * c.rhs;
    if (art_col[i] >= 0) {
      tab.at(i, art_col[i]) = 1.0;
      tab.basis()[i] = art_col[i];
    } else {
      tab.basis()[i] = slack_col[i];
    }
  }

  // Phase 1: maximize -sum(artificials).
  if (cols > first_art) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = first_art; j < cols; ++j) phase1[j] = -1.0;
    tab.SetObjective(phase1);
    tab.Run();
    if (tab.value() < -kFeasEps) return Solution{Status::kInfeasible, 0.0, {}};
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[i] < first_art) continue;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tab.at(i, j)) > kPivotEps) {
          tab.Pivot(i, j);
          break;
        }
      }
    }
    for (int j = first_art; j < cols; ++j) tab.allowed()[j] = false;
  }

  std::vector<double> phase2(cols, 0.0);
  for (int v = 0; v < nv; ++v) {
    phase2[v] = problem.objective[v];
    if (neg_col[v] >= 0) phase2[neg_col[v]] = -problem.objective[v];
  }
  tab.SetObjective(phase2);
  if (tab.Run() == Status::kUnbounded) return Solution{Status::kUnbounded, INFINITY, {}};

  std::vector<double> full(cols, 0.0);
  for (int i = 0; i < m; ++i) full[tab.basis()[i]] = tab.rhs(i);
  Solution sol{Status::kOptimal, 0.0, std::vector<double>(nv, 0.0)};
  for (int v = 0; v < nv; ++v) {
    sol.x[v] = full[v] - (neg_col[v] >= 0 ? full[neg_col[v]] : 0.0);
    sol.objective += problem.objective[v] * sol.x[v];
  }
  return sol;
}

}  // namespace rba::lp
