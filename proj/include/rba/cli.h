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

#ifndef RBA_CLI_H_
#define RBA_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rba/harness.h"

namespace rba {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,  // report found a failing criterion
  kExitValidation = 2,
  kExitViolation = 3,
  kExitSolver = 4,
};

int exit_code_for(FailureKind k);

std::string step_csv_header();
std::string step_csv_row(const std::string& scenario_id, std::uint64_t seed,
                         const StepRecord& r);
std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& scenario_id, const SweepRow& r);

// Seed: the flag, else the first scenario seed, else 0. Out: the flag, else
// the scenario's output csv. Also writes <out>.summary.json.
int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& scenario_path, const std::string& out_path, std::ostream& out,
              std::ostream& err);
int cmd_report(const std::vector<std::string>& csv_paths, std::ostream& out, std::ostream& err);
// Prints the normalized scenario.
int cmd_echo(const std::string& scenario_path, std::ostream& out, std::ostream& err);

}  // namespace rba

#endif  // RBA_CLI_H_
