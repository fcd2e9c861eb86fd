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

#ifndef RBA_GAMES_H_
#define RBA_GAMES_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rba/rng.h"

namespace rba {

inline constexpr double kProbabilityTol = 1e-12;
inline constexpr double kCertificateTol = 1e-8;

// A probability vector over a finite action set.
class MixedAction {
 public:
  // Validates that probs is nonnegative and sums to one within
  // kProbabilityTol. Throws ValidationError otherwise.
  explicit MixedAction(std::vector<double> probs);

  static MixedAction Uniform(int num_actions);
  static MixedAction Pure(int num_actions, int action);
  // Clamps small negative entries to zero and rescales onto the simplex.
  // Intended for solver output; throws if nothing positive remains.
  static MixedAction Normalized(std::vector<double> weights);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& vec() const { return probs_; }

  bool operator==(const MixedAction&) const = default;

 private:
  std::vector<double> probs_;
};

// Dense rows x cols matrix of scalars, row-major.
class ScalarMatrix {
 public:
  ScalarMatrix() = default;
  ScalarMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}
  // Builds from nested rows; throws ValidationError if ragged or empty.
  static ScalarMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int r, int c) const { return data_[Index(r, c)]; }
  double& operator()(int r, int c) { return data_[Index(r, c)]; }
  std::span<const double> row(int r) const {
    return std::span<const double>(data_).subspan(Index(r, 0), cols_);
  }
  std::vector<std::vector<double>> ToRows() const;

  bool operator==(const ScalarMatrix&) const = default;

 private:
  std::size_t Index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Finite two-player game with vector payoffs r(a, z) in R^dim.
class VectorGame {
 public:
  // payoff[a][z] is the reward vector for agent action a and opponent
  // action z. Throws ValidationError on ragged, empty or non-finite input.
  explicit VectorGame(const std::vector<std::vector<std::vector<double>>>& payoff);
  // Flat storage in [a][z][k] order.
  VectorGame(int n_agent, int n_opp, int dim, std::vector<double> flat);
  // Scalar game (dim 1) from a utility matrix.
  static VectorGame FromScalar(const ScalarMatrix& m);

  int n_agent() const { return n_agent_; }
  int n_opp() const { return n_opp_; }
  int dim() const { return dim_; }
  std::span<const double> entry(int a, int z) const {
    return std::span<const double>(payoff_).subspan(
        (static_cast<std::size_t>(a) * n_opp_ + z) * dim_, dim_);
  }
  // Euclidean span, cached at construction.
  double rho() const { return rho_; }
  std::vector<std::vector<std::vector<double>>> ToNested() const;

 private:
  void Validate();

  int n_agent_ = 0;
  int n_opp_ = 0;
  int dim_ = 0;
  std::vector<double> payoff_;
  double rho_ = 0.0;
};

struct SaddlePoint {
  MixedAction p;  // maximizer (rows, agent)
  MixedAction q;  // minimizer (columns, opponent)
  double value = 0.0;
};

// max over pairs of entries of ||r(a,z) - r(a',z')||.
double span(const VectorGame& game);

// sum_{a,z} p(a) q(z) r(a,z).
std::vector<double> expected_reward(const VectorGame& game, const MixedAction& p,
                                    const MixedAction& q);

// r(p, z) for a pure opponent action.
std::vector<double> reward_against(const VectorGame& game, const MixedAction& p, int z);

// M[a][z] = lambda . r(a,z). lambda is used as given, not normalized.
ScalarMatrix project_game(const VectorGame& game, std::span<const double> lambda);

// Value and optimal strategies of the zero-sum game where the row player
// maximizes p' M q. Only the saddle certificate is part of the contract; among
// multiple optima the simplex pivot order picks one deterministically.
// Throws SolverError if the certificate cannot be established.
SaddlePoint solve_zero_sum(const ScalarMatrix& m);

// Returns true if (p, q, value) satisfies the saddle certificate on m.
bool check_saddle_certificate(const ScalarMatrix& m, const SaddlePoint& sp,
                              double tol = kCertificateTol);

// Draws an index with probability p(a). Consumes exactly one uniform variate.
int sample_action(const MixedAction& p, Rng& rng);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
std::string format_vector(std::span<const double> x);

}  // namespace rba

#endif  // RBA_GAMES_H_
