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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "rba/cli.h"
#include "rba/errors.h"
#include "rba/games.h"
#include "rba/harness.h"
#include "rba/regret.h"
#include "rba/scenario.h"
#include "rba/sets.h"

namespace py = pybind11;
using namespace rba;

namespace {

py::dict ReportDict(const RunReport& r) {
  py::dict d;
  d["scenario_id"] = r.scenario_id;
  d["seed"] = r.seed;
  d["algorithm"] = r.algorithm;
  d["n_steps"] = r.n_steps;
  d["max_bound_ratio"] = r.max_bound_ratio;
  d["final_dist"] = r.final_dist ? py::cast(*r.final_dist) : py::none();
  d["final_lambda_norm"] = r.final_lambda_norm;
  d["certified"] = r.certified;
  d["audits_passed"] = r.audits_passed;
  d["bounds_passed"] = r.bounds_passed;
  d["failure"] = failure_kind_name(r.failure);
  d["failure_step"] = r.failure_step;
  d["failure_message"] = r.failure_message;
  return d;
}

Scenario Resolve(const std::string& scenario) {
  // Text containing a newline is scenario content, anything else a path.
  if (scenario.find('\n') != std::string::npos) return parse_scenario(scenario);
  return load_scenario(scenario);
}

}  // namespace

PYBIND11_MODULE(_rba, m) {
  m.doc() = "Response-based approachability core";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<CertificationError>(m, "CertificationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  m.def(
      "solve_zero_sum",
      [](const std::vector<std::vector<double>>& rows) {
        const SaddlePoint sp = solve_zero_sum(ScalarMatrix::FromRows(rows));
        return py::make_tuple(sp.p.vec(), sp.q.vec(), sp.value);
      },
      py::arg("matrix"), "Returns (p, q, value) for the row maximizer and column minimizer.");

  m.def(
      "regret_matching",
      [](const std::vector<double>& regrets) { return regret_matching_policy(regrets).vec(); },
      py::arg("regrets"));

  py::class_<TargetSet>(m, "TargetSet")
      .def_static("singleton", &TargetSet::Singleton, py::arg("point"))
      .def_static("nonpositive_orthant", &TargetSet::NonpositiveOrthant, py::arg("dim"))
      .def_static("box", &TargetSet::Box, py::arg("lower"), py::arg("upper"))
      .def_static("hpolyhedron", &TargetSet::HPolyhedron, py::arg("a"), py::arg("b"))
      .def_static("ball", &TargetSet::Ball, py::arg("center"), py::arg("radius"))
      .def_property_readonly("dim", &TargetSet::dim)
      .def_property_readonly("kind", &TargetSet::kind_name)
      .def_property_readonly("bounded", &TargetSet::bounded)
      .def(
          "contains",
          [](const TargetSet& s, const std::vector<double>& x, double tol) {
            return contains(s, x, tol);
          },
          py::arg("x"), py::arg("tol") = kMembershipTol)
      .def("distance", [](const TargetSet& s, const std::vector<double>& x) { return distance(s, x); })
      .def("project", [](const TargetSet& s, const std::vector<double>& x) { return project(s, x); })
      .def("support",
           [](const TargetSet& s, const std::vector<double>& theta) {
             const SupportValue v = support(s, theta);
             return v.bounded ? v.value : static_cast<double>(INFINITY);
           })
      .def("steer", [](const TargetSet& s, const std::vector<double>& lambda) {
        return steer_unbounded(lambda, s);
      });

  m.def(
      "run",
      [](const std::string& scenario, std::optional<std::uint64_t> seed) {
        const Scenario sc = Resolve(scenario);
        const ApproachProblem problem = build_problem(sc.problem);
        const RunConfig config = build_config(sc);
        const std::uint64_t s = seed ? *seed : (sc.seeds.empty() ? 0 : sc.seeds.front());
        py::list steps;
        RunReport report;
        {
          std::vector<StepRecord> records;
          report = run(problem, config, s, [&](const StepRecord& r) { records.push_back(r); });
          for (const auto& r : records) {
            py::dict d;
            d["n"] = r.n;
            d["p"] = r.p;
            d["a"] = r.a;
            d["z"] = r.z;
            d["r_bar"] = r.r_bar;
            d["lambda_norm"] = r.lambda_norm;
            d["dist_to_S"] = r.dist_to_S ? py::cast(*r.dist_to_S) : py::none();
            d["game_value"] = r.game_value ? py::cast(*r.game_value) : py::none();
            d["recursion_audit_pass"] = r.recursion_audit_pass;
            d["bound_ratio"] = r.bound_ratio ? py::cast(*r.bound_ratio) : py::none();
            steps.append(d);
          }
        }
        return py::make_tuple(steps, ReportDict(report));
      },
      py::arg("scenario"), py::arg("seed") = py::none(),
      "Runs a scenario (path or YAML text). Returns (steps, report).");

  m.def(
      "sweep",
      [](const std::string& scenario) {
        const Scenario sc = Resolve(scenario);
        const SweepResult res = sweep(build_problem(sc.problem), build_config(sc), sc.seeds,
                                      sc.sweep.value_or(SweepConfig{}));
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d;
          d["n_checkpoint"] = r.n_checkpoint;
          d["quantile_50"] = r.quantile_50;
          d["quantile_95"] = r.quantile_95;
          d["max"] = r.max;
          d["bound"] = r.bound;
          d["violation_fraction"] = r.violation_fraction;
          rows.append(d);
        }
        return rows;
      },
      py::arg("scenario"));

  m.def(
      "echo", [](const std::string& scenario) { return emit_scenario(Resolve(scenario)); },
      py::arg("scenario"), "Normalized form of a scenario.");
}
