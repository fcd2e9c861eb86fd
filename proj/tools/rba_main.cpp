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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rba/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"Response-based approachability simulator"};
  app.require_subcommand(1);

  std::string scenario, out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> csvs;

  auto* run = app.add_subcommand("run", "Run one seed of a scenario and write a step CSV");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--seed", seed, "Seed (default: first scenario seed)");
  run->add_option("--out", out, "Output CSV (default: scenario output.csv)");

  auto* sweep = app.add_subcommand("sweep", "Run every scenario seed and write checkpoint statistics");
  sweep->add_option("scenario", scenario, "Scenario file")->required();
  sweep->add_option("--out", out, "Output CSV (default: scenario output.sweep_csv)");

  auto* report = app.add_subcommand("report", "Summarize run CSVs and check their bounds");
  report->add_option("csv", csvs, "Run CSV files");

  auto* echo = app.add_subcommand("echo", "Print the normalized form of a scenario");
  echo->add_option("scenario", scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rba::kExitValidation;
  }

  if (*run) return rba::cmd_run(scenario, seed, out, std::cout, std::cerr);
  if (*sweep) return rba::cmd_sweep(scenario, out, std::cout, std::cerr);
  if (*report) return rba::cmd_report(csvs, std::cout, std::cerr);
  return rba::cmd_echo(scenario, std::cout, std::cerr);
}
