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

#ifndef RBA_SCENARIO_H_
#define RBA_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rba/approach.h"
#include "rba/harness.h"
#include "rba/sets.h"

namespace rba {

using Matrix = std::vector<std::vector<double>>;
using Tensor = std::vector<std::vector<std::vector<double>>>;

// Target set description as written in a scenario file.
struct SetSpec {
  std::string kind;  // singleton | nonpositive-orthant | box | hpolyhedron | ball
  std::vector<double> point;
  int dim = 0;
  std::vector<double> lower, upper;
  Matrix a;
  std::vector<double> b;
  std::vector<double> center;
  double radius = 0.0;

  bool operator==(const SetSpec&) const = default;
};

struct ProblemSpec {
  std::string kind;
  Matrix utility;  // external, internal, blackwell, ratio, constrained
  Matrix values;   // global-abs
  Matrix loss;     // global-dnorm, global-infnorm
  std::optional<double> d;  // global-dnorm
  Tensor cost;     // ratio (one entry per cell), constrained
  std::optional<SetSpec> constraint;  // constrained
  Tensor payoff;   // generic-vector
  std::optional<SetSpec> target;      // generic-vector
  std::string response_rule;          // generic-vector: lp | fixed
  std::vector<double> response_p;

  bool operator==(const ProblemSpec&) const = default;
};

struct Scenario {
  std::string id;
  ProblemSpec problem;
  std::string algorithm = "response-based";
  OpponentStrategy opponent;
  int n_steps = 0;
  std::vector<std::uint64_t> seeds;
  std::optional<SweepConfig> sweep;
  std::string output_csv;
  std::string output_sweep_csv;

  bool operator==(const Scenario&) const = default;
};

// Parses scenario text. Errors are ValidationError with "<source>:<line>:<col>:"
// anchors (1-based).
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);
// Normalized form; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

TargetSet build_set(const SetSpec& spec);
ApproachProblem build_problem(const ProblemSpec& spec);
RunConfig build_config(const Scenario& s);

// Shortest round-trip decimal form; inf and nan spelled inf, -inf, nan.
std::string format_double(double x);

}  // namespace rba

#endif  // RBA_SCENARIO_H_
