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

#ifndef RBA_LP_H_
#define RBA_LP_H_

#include <vector>

namespace rba::lp {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Constraint {
  std::vector<double> coeffs;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// maximize objective . x subject to the constraints. Variables are
// nonnegative unless marked free.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<bool> free;  // empty means all nonnegative
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Dense two-phase tableau simplex with Bland's rule. Sized for the small
// problems of this library (tens of rows and columns). Throws SolverError if
// the iteration cap is reached.
Solution Maximize(const Problem& problem);

}  // namespace rba::lp

#endif  // RBA_LP_H_
