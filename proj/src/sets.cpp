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

#include "rba/sets.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rba/errors.h"
#include "rba/games.h"
#include "rba/lp.h"

namespace rba {
namespace {

void CheckDim(const TargetSet& set, std::size_t n, const char* op) {
  if (static_cast<int>(n) != set.dim()) {
    throw DimensionError(std::string(op) + ": point has dimension " + std::to_string(n) +
                         ", set has dimension " + std::to_string(set.dim()));
  }
}

double MaxViolation(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                    std::span<const double> x) {
  double worst = -INFINITY;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, dot(a[i], x) - b[i]);
  return worst;
}

lp::Problem FreeVariableProblem(const std::vector<std::vector<double>>& a,
                                const std::vector<double>& b, std::vector<double> objective) {
  lp::Problem prob;
  prob.num_vars = static_cast<int>(objective.size());
  prob.objective = std::move(objective);
  prob.free.assign(prob.num_vars, true);
  for (std::size_t i = 0; i < a.size(); ++i) {
    prob.constraints.push_back({a[i], lp::Sense::kLessEqual, b[i]});
  }
  return prob;
}

// Euclidean projection onto {y : a y <= b} by a primal active-set method
// started from a feasible anchor. The working set stays linearly independent
// because a constraint only enters when it blocks a step in the null space of
// the current working rows.
std::vector<double> ProjectPolyhedron(const std::vector<std::vector<double>>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& anchor,
                                      std::span<const double> x) {
  const int dim = static_cast<int>(x.size());
  if (MaxViolation(a, b, x) <= 0.0) return {x.begin(), x.end()};
  const int m = static_cast<int>(a.size());
  Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(x.data(), dim);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(anchor.data(), dim);
  std::vector<int> working;
  const int cap = 100 * (m + dim) + 100;
  for (int iter = 0; iter < cap; ++iter) {
    const Eigen::VectorXd g = target - y;
    Eigen::VectorXd step = g;
    Eigen::VectorXd mu;
    if (!working.empty()) {
      const int k = static_cast<int>(working.size());
      Eigen::MatrixXd aw(k, dim);
      for (int r = 0; r < k; ++r) {
        aw.row(r) = Eigen::Map<const Eigen::RowVectorXd>(a[working[r]].data(), dim);
      }
      const Eigen::MatrixXd gram = aw * aw.transpose();
      mu = gram.ldlt().solve(aw * g);
      step = g - aw.transpose() * mu;
    }
    if (step.norm() <= 1e-13 * (1.0 + g.norm())) {
      int drop = -1;
      for (int r = 0; r < mu.size(); ++r) {
        if (mu[r] < -1e-13 && (drop < 0 || mu[r] < mu[drop])) drop = r;
      }
      if (drop < 0) return {y.data(), y.data() + dim};
      working.erase(working.begin() + drop);
      continue;
    }
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(working.begin(), working.end(), i) != working.end()) continue;
      const Eigen::Map<const Eigen::VectorXd> ai(a[i].data(), dim);
      const double as = ai.dot(step);
      if (as <= 1e-15) continue;
      const double t = std::max(0.0, (b[i] - ai.dot(y)) / as);
      if (t < alpha) {
        alpha = t;
        blocking = i;
      }
    }
    y += alpha * step;
    if (blocking >= 0) working.push_back(blocking);
  }
  throw SolverError("project: active-set iteration cap reached on a polyhedron with " +
                    std::to_string(m) + " constraints");
}

}  // namespace

// -- Construction -------------------------------------------------------------

TargetSet TargetSet::Singleton(std::vector<double> point) {
  if (point.empty()) throw ValidationError("singleton set needs a point of dimension >= 1");
  for (double v : point) {
    if (!std::isfinite(v)) throw ValidationError("singleton point must be finite");
  }
  TargetSet s;
  s.kind_ = Kind::kSingleton;
  s.dim_ = static_cast<int>(point.size());
  s.p0_ = std::move(point);
  s.Finish();
  return s;
}

TargetSet TargetSet::NonpositiveOrthant(int dim) {
  if (dim < 1) throw ValidationError("orthant needs dimension >= 1");
  TargetSet s;
  s.kind_ = Kind::kNonpositiveOrthant;
  s.dim_ = dim;
  s.Finish();
  return s;
}

TargetSet TargetSet::Box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw ValidationError("box bounds must be nonempty and of equal length");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == INFINITY || upper[i] == -INFINITY) {
      throw ValidationError("box bound " + std::to_string(i) + " is empty or invalid");
    }
  }
  TargetSet s;
  s.kind_ = Kind::kBox;
  s.dim_ = static_cast<int>(lower.size());
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.Finish();
  return s;
}

TargetSet TargetSet::HPolyhedron(std::vector<std::vector<double>> a, std::vector<double> b) {
  if (a.empty() || a.front().empty() || a.size() != b.size()) {
    throw ValidationError("polyhedron needs matching nonempty constraint rows and bounds");
  }
  const std::size_t dim = a.front().size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != dim) throw ValidationError("polyhedron has ragged constraint rows");
    for (double v : a[i]) {
      if (!std::isfinite(v)) throw ValidationError("polyhedron coefficient is not finite");
    }
    if (!std::isfinite(b[i])) throw ValidationError("polyhedron bound is not finite");
  }
  TargetSet s;
  s.kind_ = Kind::kHPolyhedron;
  s.dim_ = static_cast<int>(dim);
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  s.Finish();
  return s;
}

TargetSet TargetSet::Ball(std::vector<double> center, double radius) {
  if (center.empty()) throw ValidationError("ball needs a center of dimension >= 1");
  if (!std::isfinite(radius) || radius < 0.0) {
    throw ValidationError("ball radius must be finite and nonnegative");
  }
  for (double v : center) {
    if (!std::isfinite(v)) throw ValidationError("ball center must be finite");
  }
  TargetSet s;
  s.kind_ = Kind::kBall;
  s.dim_ = static_cast<int>(center.size());
  s.p0_ = std::move(center);
  s.radius_ = radius;
  s.Finish();
  return s;
}

void TargetSet::Finish() {
  recession_.clear();
  switch (kind_) {
    case Kind::kSingleton:
      anchor_ = p0_;
      diameter_bound_ = 0.0;
      break;
    case Kind::kBall:
      anchor_ = p0_;
      diameter_bound_ = 2.0 * radius_;
      break;
    case Kind::kNonpositiveOrthant:
      anchor_.assign(dim_, 0.0);
      for (int j = 0; j < dim_; ++j) recession_.push_back({j, -1});
      break;
    case Kind::kBox: {
      anchor_.assign(dim_, 0.0);
      double diag = 0.0;
      for (int j = 0; j < dim_; ++j) {
        anchor_[j] = std::clamp(0.0, lower_[j], upper_[j]);
        if (upper_[j] == INFINITY) recession_.push_back({j, +1});
        if (lower_[j] == -INFINITY) recession_.push_back({j, -1});
        diag += (upper_[j] - lower_[j]) * (upper_[j] - lower_[j]);
      }
      diameter_bound_ = std::sqrt(diag);
      break;
    }
    case Kind::kHPolyhedron: {
      auto feas = lp::Maximize(FreeVariableProblem(a_, b_, std::vector<double>(dim_, 0.0)));
      if (feas.status != lp::Status::kOptimal) {
        throw ValidationError("polyhedron {x : a x <= b} is empty");
      }
      anchor_ = feas.x;
      for (int j = 0; j < dim_; ++j) {
        for (int sgn : {+1, -1}) {
          bool in_cone = true;
          for (const auto& row : a_) in_cone = in_cone && sgn * row[j] <= 0.0;
          if (in_cone) recession_.push_back({j, sgn});
        }
      }
      // The cone {d : a d <= 0} is the quadrant spanned by recession_ iff no
      // direction in it has a positive component along an excluded axis sign.
      std::vector<std::vector<double>> cone_a = a_;
      std::vector<double> cone_b(a_.size(), 0.0);
      for (int j = 0; j < dim_; ++j) {
        std::vector<double> e(dim_, 0.0);
        e[j] = 1.0;
        cone_a.push_back(e);
        cone_b.push_back(1.0);
        e[j] = -1.0;
        cone_a.push_back(e);
        cone_b.push_back(1.0);
      }
      recession_is_quadrant_ = true;
      for (int j = 0; j < dim_ && recession_is_quadrant_; ++j) {
        for (int sgn : {+1, -1}) {
          if (std::find(recession_.begin(), recession_.end(), RecessionDirection{j, sgn}) !=
              recession_.end()) {
            continue;
          }
          std::vector<double> obj(dim_, 0.0);
          obj[j] = sgn;
          auto sol = lp::Maximize(FreeVariableProblem(cone_a, cone_b, obj));
          if (sol.status == lp::Status::kOptimal && sol.objective > 1e-9) {
            recession_is_quadrant_ = false;
            break;
          }
        }
      }
      const bool has_recession = !recession_.empty() || !recession_is_quadrant_;
      if (!has_recession) {
        double diag = 0.0;
        for (int j = 0; j < dim_; ++j) {
          std::vector<double> obj(dim_, 0.0);
          obj[j] = 1.0;
          const double hi = lp::Maximize(FreeVariableProblem(a_, b_, obj)).objective;
          obj[j] = -1.0;
          const double lo = -lp::Maximize(FreeVariableProblem(a_, b_, obj)).objective;
          diag += (hi - lo) * (hi - lo);
        }
        diameter_bound_ = std::sqrt(diag);
      }
      break;
    }
  }
  bounded_ = recession_.empty() && recession_is_quadrant_;
  if (!bounded_) diameter_bound_ = INFINITY;
}

std::string TargetSet::kind_name() const {
  switch (kind_) {
    case Kind::kSingleton: return "singleton";
    case Kind::kNonpositiveOrthant: return "nonpositive-orthant";
    case Kind::kBox: return "box";
    case Kind::kHPolyhedron: return "hpolyhedron";
    case Kind::kBall: return "ball";
  }
  return "unknown";
}

std::optional<Halfspaces> TargetSet::halfspaces() const {
  Halfspaces h;
  auto unit = [this](int j, double s) {
    std::vector<double> e(dim_, 0.0);
    e[j] = s;
    return e;
  };
  switch (kind_) {
    case Kind::kBall:
      return std::nullopt;
    case Kind::kHPolyhedron:
      h.a = a_;
      h.b = b_;
      break;
    case Kind::kNonpositiveOrthant:
      for (int j = 0; j < dim_; ++j) {
        h.a.push_back(unit(j, 1.0));
        h.b.push_back(0.0);
      }
      break;
    case Kind::kSingleton:
      for (int j = 0; j < dim_; ++j) {
        h.a.push_back(unit(j, 1.0));
        h.b.push_back(p0_[j]);
        h.a.push_back(unit(j, -1.0));
        h.b.push_back(-p0_[j]);
      }
      break;
    case Kind::kBox:
      for (int j = 0; j < dim_; ++j) {
        if (upper_[j] < INFINITY) {
          h.a.push_back(unit(j, 1.0));
          h.b.push_back(upper_[j]);
        }
        if (lower_[j] > -INFINITY) {
          h.a.push_back(unit(j, -1.0));
          h.b.push_back(-lower_[j]);
        }
      }
      break;
  }
  return h;
}

// -- Queries ------------------------------------------------------------------

bool contains(const TargetSet& set, std::span<const double> x, double tol) {
  CheckDim(set, x.size(), "contains");
  if (set.kind() == TargetSet::Kind::kHPolyhedron && MaxViolation(set.a(), set.b(), x) <= 0.0) {
    return true;
  }
  return distance(set, x) <= tol;
}

double distance(const TargetSet& set, std::span<const double> x) {
  CheckDim(set, x.size(), "distance");
  switch (set.kind()) {
    case TargetSet::Kind::kNonpositiveOrthant: {
      double sq = 0.0;
      for (double v : x) sq += v > 0.0 ? v * v : 0.0;
      return std::sqrt(sq);
    }
    case TargetSet::Kind::kBall: {
      double sq = 0.0;
      for (int j = 0; j < set.dim(); ++j) sq += (x[j] - set.point()[j]) * (x[j] - set.point()[j]);
      return std::max(0.0, std::sqrt(sq) - set.radius());
    }
    default: {
      auto y = project(set, x);
      double sq = 0.0;
      for (int j = 0; j < set.dim(); ++j) sq += (x[j] - y[j]) * (x[j] - y[j]);
      return std::sqrt(sq);
    }
  }
}

std::vector<double> project(const TargetSet& set, std::span<const double> x) {
  CheckDim(set, x.size(), "project");
  std::vector<double> y(x.begin(), x.end());
  switch (set.kind()) {
    case TargetSet::Kind::kSingleton:
      return set.point();
    case TargetSet::Kind::kNonpositiveOrthant:
      for (double& v : y) v = std::min(v, 0.0);
      return y;
    case TargetSet::Kind::kBox:
      for (int j = 0; j < set.dim(); ++j) y[j] = std::clamp(y[j], set.lower()[j], set.upper()[j]);
      return y;
    case TargetSet::Kind::kBall: {
      double sq = 0.0;
      for (int j = 0; j < set.dim(); ++j) sq += (x[j] - set.point()[j]) * (x[j] - set.point()[j]);
      const double r = std::sqrt(sq);
      if (r <= set.radius()) return y;
      for (int j = 0; j < set.dim(); ++j) {
        y[j] = set.point()[j] + (x[j] - set.point()[j]) * (set.radius() / r);
      }
      return y;
    }
    case TargetSet::Kind::kHPolyhedron:
      return ProjectPolyhedron(set.a(), set.b(), set.anchor(), x);
  }
  return y;
}

SupportValue support(const TargetSet& set, std::span<const double> theta) {
  CheckDim(set, theta.size(), "support");
  switch (set.kind()) {
    case TargetSet::Kind::kSingleton:
      return SupportValue::Finite(dot(theta, set.point()));
    case TargetSet::Kind::kBall:
      return SupportValue::Finite(dot(theta, set.point()) + set.radius() * norm(theta));
    case TargetSet::Kind::kNonpositiveOrthant:
      for (double t : theta) {
        if (t > 0.0) return SupportValue::Unbounded();
      }
      return SupportValue::Finite(0.0);
    case TargetSet::Kind::kBox: {
      double s = 0.0;
      for (int j = 0; j < set.dim(); ++j) {
        if (theta[j] > 0.0) {
          if (set.upper()[j] == INFINITY) return SupportValue::Unbounded();
          s += theta[j] * set.upper()[j];
        } else if (theta[j] < 0.0) {
          if (set.lower()[j] == -INFINITY) return SupportValue::Unbounded();
          s += theta[j] * set.lower()[j];
        }
      }
      return SupportValue::Finite(s);
    }
    case TargetSet::Kind::kHPolyhedron: {
      auto sol = lp::Maximize(
          FreeVariableProblem(set.a(), set.b(), std::vector<double>(theta.begin(), theta.end())));
      if (sol.status == lp::Status::kUnbounded) return SupportValue::Unbounded();
      return SupportValue::Finite(sol.objective);
    }
  }
  return SupportValue::Unbounded();
}

std::vector<double> support_argmax(const TargetSet& set, std::span<const double> theta) {
  CheckDim(set, theta.size(), "support_argmax");
  auto unbounded = [&]() {
    return ValidationError("support_argmax: support of the " + set.kind_name() +
                           " set is unbounded in direction " + format_vector(theta));
  };
  switch (set.kind()) {
    case TargetSet::Kind::kSingleton:
      return set.point();
    case TargetSet::Kind::kBall: {
      std::vector<double> s = set.point();
      const double n = norm(theta);
      if (n == 0.0) return s;
      for (int j = 0; j < set.dim(); ++j) s[j] += set.radius() * theta[j] / n;
      return s;
    }
    case TargetSet::Kind::kNonpositiveOrthant:
      for (double t : theta) {
        if (t > 0.0) throw unbounded();
      }
      return std::vector<double>(set.dim(), 0.0);
    case TargetSet::Kind::kBox: {
      std::vector<double> s(set.dim(), 0.0);
      for (int j = 0; j < set.dim(); ++j) {
        const double lo = set.lower()[j], hi = set.upper()[j];
        if (theta[j] > 0.0) {
          if (hi == INFINITY) throw unbounded();
          s[j] = hi;
        } else if (theta[j] < 0.0) {
          if (lo == -INFINITY) throw unbounded();
          s[j] = lo;
        } else {
          s[j] = lo > -INFINITY ? lo : (hi < INFINITY ? hi : 0.0);
        }
      }
      return s;
    }
    case TargetSet::Kind::kHPolyhedron: {
      auto sol = lp::Maximize(
          FreeVariableProblem(set.a(), set.b(), std::vector<double>(theta.begin(), theta.end())));
      if (sol.status != lp::Status::kOptimal) throw unbounded();
      return sol.x;
    }
  }
  throw unbounded();
}

std::vector<double> steer_unbounded(std::span<const double> lambda,
                                    std::span<const RecessionDirection> recession) {
  std::vector<double> out(lambda.begin(), lambda.end());
  for (const auto& d : recession) {
    if (d.axis < 0 || d.axis >= static_cast<int>(out.size())) {
      throw DimensionError("steer_unbounded: recession axis out of range");
    }
    if (d.sign * lambda[d.axis] < 0.0) out[d.axis] = 0.0;
  }
  return out;
}

std::vector<double> steer_unbounded(std::span<const double> lambda, const TargetSet& set) {
  CheckDim(set, lambda.size(), "steer_unbounded");
  if (!set.recession_is_quadrant()) {
    throw ValidationError("steer_unbounded: recession cone of the " + set.kind_name() +
                          " set is not a quadrant");
  }
  return steer_unbounded(lambda, set.quadrant_recession());
}

}  // namespace rba
