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

#include "rba/scenario.h"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "rba/errors.h"
#include "rba/regret.h"

namespace rba {
namespace {

// Input probabilities may be off the simplex by this much; they are
// renormalized when the scenario is built.
constexpr double kInputProbabilityTol = 1e-9;

const std::set<std::string> kProblemKinds = {
    "external", "internal",       "blackwell", "global-abs",    "global-dnorm",
    "global-infnorm", "ratio",    "constrained", "generic-vector"};

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Fail(const YAML::Node& node, const std::string& msg) const {
    const YAML::Mark m = node.Mark();
    std::ostringstream out;
    out << source_;
    if (m.line >= 0) out << ":" << m.line + 1 << ":" << m.column + 1;
    out << ": " << msg;
    throw ValidationError(out.str());
  }

  void ExpectMap(const YAML::Node& node, const std::string& what,
                 const std::set<std::string>& allowed) const {
    if (!node.IsMap()) Fail(node, what + " must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) Fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  YAML::Node Require(const YAML::Node& map, const std::string& key, const std::string& what) const {
    YAML::Node n = map[key];
    if (!n) Fail(map, what + " is missing required key '" + key + "'");
    return n;
  }

  std::string String(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) Fail(n, what + " must be a scalar");
    return n.as<std::string>();
  }

  double Double(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) Fail(n, what + " must be a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      Fail(n, what + " must be a number, got '" + n.Scalar() + "'");
    }
  }

  long long Integer(const YAML::Node& n, const std::string& what, long long lo,
                    long long hi) const {
    if (!n.IsScalar()) Fail(n, what + " must be an integer");
    long long v = 0;
    try {
      v = n.as<long long>();
    } catch (const YAML::Exception&) {
      Fail(n, what + " must be an integer, got '" + n.Scalar() + "'");
    }
    if (v < lo || v > hi) {
      Fail(n, what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }

  std::uint64_t Unsigned(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) Fail(n, what + " must be a nonnegative integer");
    try {
      return n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      Fail(n, what + " must be a nonnegative integer, got '" + n.Scalar() + "'");
    }
  }

  std::vector<double> Vector(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) Fail(n, what + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& x : n) out.push_back(Double(x, what + " entry"));
    return out;
  }

  Matrix MatrixOf(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence() || n.size() == 0) Fail(n, what + " must be a nonempty list of rows");
    Matrix out;
    for (const auto& row : n) {
      out.push_back(Vector(row, what + " row"));
      if (out.back().empty()) Fail(row, what + " has an empty row");
      if (out.back().size() != out.front().size()) {
        Fail(row, what + " is ragged: expected " + std::to_string(out.front().size()) +
                      " entries per row");
      }
    }
    return out;
  }

  // Cells may be scalars (promoted to length-1 vectors) or lists.
  Tensor TensorOf(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence() || n.size() == 0) Fail(n, what + " must be a nonempty list of rows");
    Tensor out;
    std::size_t cols = 0, dim = 0;
    for (const auto& row : n) {
      if (!row.IsSequence() || row.size() == 0) Fail(row, what + " rows must be nonempty lists");
      if (out.empty()) cols = row.size();
      if (row.size() != cols) Fail(row, what + " is ragged");
      out.emplace_back();
      for (const auto& cell : row) {
        out.back().push_back(cell.IsScalar() ? std::vector<double>{Double(cell, what + " entry")}
                                             : Vector(cell, what + " entry"));
        if (dim == 0) dim = out.back().back().size();
        if (out.back().back().size() != dim || dim == 0) {
          Fail(cell, what + " entries must all have the same nonzero length");
        }
      }
    }
    return out;
  }

  SetSpec Set(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) Fail(n, what + " must be a mapping");
    SetSpec s;
    s.kind = String(Require(n, "kind", what), what + " kind");
    if (s.kind == "singleton") {
      ExpectMap(n, what, {"kind", "point"});
      s.point = Vector(Require(n, "point", what), "point");
    } else if (s.kind == "nonpositive-orthant") {
      ExpectMap(n, what, {"kind", "dim"});
      s.dim = static_cast<int>(Integer(Require(n, "dim", what), "dim", 1, 1 << 20));
    } else if (s.kind == "box") {
      ExpectMap(n, what, {"kind", "lower", "upper"});
      s.lower = Vector(Require(n, "lower", what), "lower");
      s.upper = Vector(Require(n, "upper", what), "upper");
    } else if (s.kind == "hpolyhedron") {
      ExpectMap(n, what, {"kind", "a", "b"});
      s.a = MatrixOf(Require(n, "a", what), "a");
      s.b = Vector(Require(n, "b", what), "b");
    } else if (s.kind == "ball") {
      ExpectMap(n, what, {"kind", "center", "radius"});
      s.center = Vector(Require(n, "center", what), "center");
      s.radius = Double(Require(n, "radius", what), "radius");
    } else {
      Fail(n["kind"], "unknown set kind '" + s.kind +
                          "' (expected singleton, nonpositive-orthant, box, hpolyhedron or ball)");
    }
    try {
      build_set(s);
    } catch (const ValidationError& e) {
      Fail(n, e.what());
    }
    return s;
  }

  ProblemSpec Problem(const YAML::Node& n) const {
    if (!n.IsMap()) Fail(n, "problem must be a mapping");
    ProblemSpec p;
    p.kind = String(Require(n, "kind", "problem"), "problem kind");
    if (!kProblemKinds.count(p.kind)) Fail(n["kind"], "unknown problem kind '" + p.kind + "'");
    std::set<std::string> keys = {"kind"};
    if (p.kind == "external" || p.kind == "internal" || p.kind == "blackwell") {
      keys.insert("utility");
    } else if (p.kind == "global-abs") {
      keys.insert("values");
    } else if (p.kind == "global-dnorm") {
      keys.insert({"loss", "d"});
    } else if (p.kind == "global-infnorm") {
      keys.insert("loss");
    } else if (p.kind == "ratio") {
      keys.insert({"utility", "cost"});
    } else if (p.kind == "constrained") {
      keys.insert({"utility", "cost", "constraint"});
    } else {
      keys.insert({"payoff", "target", "response"});
    }
    ExpectMap(n, "problem of kind '" + p.kind + "'", keys);
    const std::string what = "problem";
    if (keys.count("utility")) p.utility = MatrixOf(Require(n, "utility", what), "utility");
    if (keys.count("values")) p.values = MatrixOf(Require(n, "values", what), "values");
    if (keys.count("loss")) p.loss = MatrixOf(Require(n, "loss", what), "loss");
    if (keys.count("d")) p.d = Double(Require(n, "d", what), "d");
    if (keys.count("cost")) p.cost = TensorOf(Require(n, "cost", what), "cost");
    if (keys.count("constraint")) p.constraint = Set(Require(n, "constraint", what), "constraint");
    if (keys.count("payoff")) p.payoff = TensorOf(Require(n, "payoff", what), "payoff");
    if (keys.count("target")) p.target = Set(Require(n, "target", what), "target");
    if (keys.count("response")) {
      const YAML::Node r = Require(n, "response", what);
      ExpectMap(r, "response", {"rule", "p"});
      p.response_rule = String(Require(r, "rule", "response"), "response rule");
      if (p.response_rule == "fixed") {
        p.response_p = Vector(Require(r, "p", "response"), "response p");
        CheckProbabilities(r["p"], p.response_p, "response p");
      } else if (p.response_rule == "lp") {
        if (r["p"]) Fail(r["p"], "response rule 'lp' takes no p");
      } else {
        Fail(r["rule"], "unknown response rule '" + p.response_rule + "' (expected lp or fixed)");
      }
    }
    try {
      build_problem(p);
    } catch (const ValidationError& e) {
      Fail(n, e.what());
    }
    return p;
  }

  void CheckProbabilities(const YAML::Node& n, const std::vector<double>& p,
                          const std::string& what) const {
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0) || !std::isfinite(x)) Fail(n, what + " has a negative or non-finite entry");
      total += x;
    }
    if (!(std::abs(total - 1.0) <= kInputProbabilityTol)) {
      Fail(n, what + " must sum to 1 (sums to " + format_double(total) + ")");
    }
  }

  OpponentStrategy Opponent(const YAML::Node& n) const {
    if (!n.IsMap()) Fail(n, "opponent must be a mapping");
    OpponentStrategy o;
    const std::string kind = String(Require(n, "kind", "opponent"), "opponent kind");
    try {
      o.kind = parse_opponent_kind(kind);
    } catch (const ValidationError& e) {
      Fail(n["kind"], e.what());
    }
    switch (o.kind) {
      case OpponentStrategy::Kind::kFixedMixed:
        ExpectMap(n, "opponent", {"kind", "q"});
        o.q = Vector(Require(n, "q", "opponent"), "opponent q");
        CheckProbabilities(n["q"], o.q, "opponent q");
        break;
      case OpponentStrategy::Kind::kPeriodicPure: {
        ExpectMap(n, "opponent", {"kind", "sequence"});
        const YAML::Node seq = Require(n, "sequence", "opponent");
        if (!seq.IsSequence() || seq.size() == 0) Fail(seq, "opponent sequence must be a nonempty list");
        for (const auto& z : seq) o.sequence.push_back(static_cast<int>(Integer(z, "opponent action", 0, 1 << 20)));
        break;
      }
      default:
        ExpectMap(n, "opponent", {"kind"});
    }
    return o;
  }

  Scenario Parse(const YAML::Node& root) const {
    ExpectMap(root, "scenario",
              {"id", "problem", "algorithm", "opponent", "n_steps", "seeds", "sweep", "output"});
    Scenario s;
    s.id = String(Require(root, "id", "scenario"), "id");
    if (s.id.empty() || s.id.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                               "0123456789_.+-") != std::string::npos) {
      Fail(root["id"], "id must be nonempty and use only letters, digits and _ . + -");
    }
    s.problem = Problem(Require(root, "problem", "scenario"));
    if (root["algorithm"]) {
      s.algorithm = String(root["algorithm"], "algorithm");
      try {
        parse_algorithm(s.algorithm);
      } catch (const ValidationError& e) {
        Fail(root["algorithm"], e.what());
      }
    }
    s.opponent = Opponent(Require(root, "opponent", "scenario"));
    s.n_steps = static_cast<int>(
        Integer(Require(root, "n_steps", "scenario"), "n_steps", 0, 100000000));
    if (const YAML::Node seeds = root["seeds"]) {
      if (!seeds.IsSequence()) Fail(seeds, "seeds must be a list of nonnegative integers");
      for (const auto& x : seeds) s.seeds.push_back(Unsigned(x, "seed"));
    }
    if (const YAML::Node sw = root["sweep"]) {
      ExpectMap(sw, "sweep", {"checkpoints", "delta"});
      SweepConfig c;
      if (const YAML::Node cp = sw["checkpoints"]) {
        if (!cp.IsSequence() || cp.size() == 0) Fail(cp, "checkpoints must be a nonempty list");
        c.checkpoints.clear();
        for (const auto& x : cp) c.checkpoints.push_back(static_cast<int>(Integer(x, "checkpoint", 1, 100000000)));
      }
      if (const YAML::Node d = sw["delta"]) {
        c.delta = Double(d, "delta");
        if (!(c.delta > 0.0 && c.delta < 1.0)) Fail(d, "delta must lie in (0, 1)");
      }
      s.sweep = c;
    }
    if (const YAML::Node out = root["output"]) {
      ExpectMap(out, "output", {"csv", "sweep_csv"});
      if (out["csv"]) s.output_csv = String(out["csv"], "output csv");
      if (out["sweep_csv"]) s.output_sweep_csv = String(out["sweep_csv"], "output sweep_csv");
    }
    try {
      auto problem = build_problem(s.problem);
      auto config = build_config(s);
      validate_opponent(config.opponent, problem);
    } catch (const ValidationError& e) {
      Fail(root["opponent"], e.what());
    }
    return s;
  }

 private:
  std::string source_;
};

// -- Emission -----------------------------------------------------------------

std::string YamlDouble(double x) {
  if (x == INFINITY) return ".inf";
  if (x == -INFINITY) return "-.inf";
  if (std::isnan(x)) return ".nan";
  return format_double(x);
}

std::string YamlString(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string Flow(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + YamlDouble(v[i]);
  return out + "]";
}

std::string Flow(const Matrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? ", " : "") + Flow(m[i]);
  return out + "]";
}

std::string Flow(const Tensor& t) {
  bool scalar = true;
  for (const auto& row : t)
    for (const auto& cell : row) scalar = scalar && cell.size() == 1;
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      out += j ? ", " : "";
      out += scalar ? YamlDouble(t[i][j][0]) : Flow(t[i][j]);
    }
    out += "]";
  }
  return out + "]";
}

void EmitSet(std::ostringstream& out, const std::string& key, const SetSpec& s) {
  out << "  " << key << ":\n    kind: " << s.kind << "\n";
  if (s.kind == "singleton") out << "    point: " << Flow(s.point) << "\n";
  if (s.kind == "nonpositive-orthant") out << "    dim: " << s.dim << "\n";
  if (s.kind == "box") {
    out << "    lower: " << Flow(s.lower) << "\n    upper: " << Flow(s.upper) << "\n";
  }
  if (s.kind == "hpolyhedron") out << "    a: " << Flow(s.a) << "\n    b: " << Flow(s.b) << "\n";
  if (s.kind == "ball") {
    out << "    center: " << Flow(s.center) << "\n    radius: " << YamlDouble(s.radius) << "\n";
  }
}

ScalarMatrix CellsToMatrix(const Tensor& t, const std::string& what) {
  Matrix m;
  for (const auto& row : t) {
    m.emplace_back();
    for (const auto& cell : row) {
      if (cell.size() != 1) throw ValidationError(what + " entries must be scalars");
      m.back().push_back(cell[0]);
    }
  }
  return ScalarMatrix::FromRows(m);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError(source + ":" + std::to_string(e.mark.line + 1) + ":" +
                          std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root || root.IsNull()) throw ValidationError(source + ": empty scenario");
  return Parser(source).Parse(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string emit_scenario(const Scenario& s) {
  std::ostringstream out;
  const ProblemSpec& p = s.problem;
  out << "id: " << s.id << "\n";
  out << "problem:\n  kind: " << p.kind << "\n";
  if (!p.utility.empty()) out << "  utility: " << Flow(p.utility) << "\n";
  if (!p.values.empty()) out << "  values: " << Flow(p.values) << "\n";
  if (!p.loss.empty()) out << "  loss: " << Flow(p.loss) << "\n";
  if (p.d) out << "  d: " << YamlDouble(*p.d) << "\n";
  if (!p.cost.empty()) out << "  cost: " << Flow(p.cost) << "\n";
  if (p.constraint) EmitSet(out, "constraint", *p.constraint);
  if (!p.payoff.empty()) out << "  payoff: " << Flow(p.payoff) << "\n";
  if (p.target) EmitSet(out, "target", *p.target);
  if (!p.response_rule.empty()) {
    out << "  response:\n    rule: " << p.response_rule << "\n";
    if (p.response_rule == "fixed") out << "    p: " << Flow(p.response_p) << "\n";
  }
  out << "algorithm: " << s.algorithm << "\n";
  out << "opponent:\n  kind: " << opponent_kind_name(s.opponent.kind) << "\n";
  if (s.opponent.kind == OpponentStrategy::Kind::kFixedMixed) {
    out << "  q: " << Flow(s.opponent.q) << "\n";
  }
  if (s.opponent.kind == OpponentStrategy::Kind::kPeriodicPure) {
    out << "  sequence: [";
    for (std::size_t i = 0; i < s.opponent.sequence.size(); ++i) {
      out << (i ? ", " : "") << s.opponent.sequence[i];
    }
    out << "]\n";
  }
  out << "n_steps: " << s.n_steps << "\n";
  out << "seeds: [";
  for (std::size_t i = 0; i < s.seeds.size(); ++i) out << (i ? ", " : "") << s.seeds[i];
  out << "]\n";
  if (s.sweep) {
    out << "sweep:\n  checkpoints: [";
    for (std::size_t i = 0; i < s.sweep->checkpoints.size(); ++i) {
      out << (i ? ", " : "") << s.sweep->checkpoints[i];
    }
    out << "]\n  delta: " << YamlDouble(s.sweep->delta) << "\n";
  }
  if (!s.output_csv.empty() || !s.output_sweep_csv.empty()) {
    out << "output:\n";
    if (!s.output_csv.empty()) out << "  csv: " << YamlString(s.output_csv) << "\n";
    if (!s.output_sweep_csv.empty()) {
      out << "  sweep_csv: " << YamlString(s.output_sweep_csv) << "\n";
    }
  }
  return out.str();
}

TargetSet build_set(const SetSpec& s) {
  if (s.kind == "singleton") return TargetSet::Singleton(s.point);
  if (s.kind == "nonpositive-orthant") return TargetSet::NonpositiveOrthant(s.dim);
  if (s.kind == "box") return TargetSet::Box(s.lower, s.upper);
  if (s.kind == "hpolyhedron") return TargetSet::HPolyhedron(s.a, s.b);
  if (s.kind == "ball") return TargetSet::Ball(s.center, s.radius);
  throw ValidationError("unknown set kind '" + s.kind + "'");
}

ApproachProblem build_problem(const ProblemSpec& p) {
  const std::string& k = p.kind;
  if (k == "external") return build_external_game(ScalarMatrix::FromRows(p.utility));
  if (k == "internal") return build_internal_game(ScalarMatrix::FromRows(p.utility));
  if (k == "blackwell") return build_blackwell_embedding(ScalarMatrix::FromRows(p.utility));
  if (k == "global-abs") {
    return build_global({GlobalCost::kAbsoluteValue}, ScalarMatrix::FromRows(p.values));
  }
  if (k == "global-dnorm") {
    if (!p.d) throw ValidationError("global-dnorm needs an exponent d");
    return build_global({GlobalCost::kDNorm, *p.d}, ScalarMatrix::FromRows(p.loss));
  }
  if (k == "global-infnorm") {
    return build_global({GlobalCost::kInfNorm}, ScalarMatrix::FromRows(p.loss));
  }
  if (k == "ratio") {
    return build_ratio(ScalarMatrix::FromRows(p.utility), CellsToMatrix(p.cost, "ratio cost"));
  }
  if (k == "constrained") {
    if (!p.constraint) throw ValidationError("constrained problem needs a constraint set");
    auto problem = build_constrained(ScalarMatrix::FromRows(p.utility), VectorGame(p.cost),
                                     build_set(*p.constraint));
    // Feasibility of the constraint at every pure opponent action.
    const int nz = problem.game.n_opp();
    for (int z = 0; z < nz; ++z) problem.oracle.respond(MixedAction::Pure(nz, z));
    return problem;
  }
  if (k == "generic-vector") {
    if (!p.target) throw ValidationError("generic-vector problem needs a target");
    GenericResponse r;
    if (p.response_rule == "fixed") {
      r.rule = GenericResponse::Rule::kFixed;
      r.p = MixedAction::Normalized(p.response_p).vec();
    } else if (p.response_rule == "lp") {
      r.rule = GenericResponse::Rule::kLp;
    } else {
      throw ValidationError("unknown response rule '" + p.response_rule + "'");
    }
    return build_generic_vector(VectorGame(p.payoff), build_set(*p.target), r);
  }
  throw ValidationError("unknown problem kind '" + k + "'");
}

RunConfig build_config(const Scenario& s) {
  RunConfig c;
  c.scenario_id = s.id;
  c.algorithm = parse_algorithm(s.algorithm);
  c.opponent = s.opponent;
  if (c.opponent.kind == OpponentStrategy::Kind::kFixedMixed) {
    c.opponent.q = MixedAction::Normalized(c.opponent.q).vec();
  }
  c.n_steps = s.n_steps;
  return c;
}

}  // namespace rba
