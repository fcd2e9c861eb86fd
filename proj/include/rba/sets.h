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

#ifndef RBA_SETS_H_
#define RBA_SETS_H_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rba {

inline constexpr double kMembershipTol = 1e-9;

// A signed coordinate direction sign * e_axis.
struct RecessionDirection {
  int axis = 0;
  int sign = 1;  // +1 or -1
  bool operator==(const RecessionDirection&) const = default;
};

// Value of a support function: finite, or +infinity for directions in which
// the set is unbounded.
struct SupportValue {
  bool bounded = true;
  double value = 0.0;

  static SupportValue Finite(double v) { return {true, v}; }
  static SupportValue Unbounded() { return {false, 0.0}; }
};

struct Halfspaces {
  std::vector<std::vector<double>> a;  // rows a_i
  std::vector<double> b;               // a_i . x <= b_i
};

// Closed convex target set in R^dim.
class TargetSet {
 public:
  enum class Kind { kSingleton, kNonpositiveOrthant, kBox, kHPolyhedron, kBall };

  static TargetSet Singleton(std::vector<double> point);
  static TargetSet NonpositiveOrthant(int dim);
  // Bounds may be -inf / +inf. Requires lower <= upper coordinatewise.
  static TargetSet Box(std::vector<double> lower, std::vector<double> upper);
  // {x : a x <= b}. Throws ValidationError if empty (checked by LP).
  static TargetSet HPolyhedron(std::vector<std::vector<double>> a, std::vector<double> b);
  static TargetSet Ball(std::vector<double> center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string kind_name() const;

  // Signed axis directions d with d + S subset of S.
  const std::vector<RecessionDirection>& quadrant_recession() const { return recession_; }
  // True when the recession cone is generated by quadrant_recession().
  bool recession_is_quadrant() const { return recession_is_quadrant_; }
  bool bounded() const { return bounded_; }
  // Upper bound on the diameter; infinite for unbounded sets.
  double diameter_bound() const { return diameter_bound_; }
  // Halfspace form for polyhedral kinds; nullopt for balls.
  std::optional<Halfspaces> halfspaces() const;

  // Shape parameters, for serialization.
  const std::vector<double>& point() const { return p0_; }     // singleton point / ball center
  const std::vector<double>& lower() const { return lower_; }  // box
  const std::vector<double>& upper() const { return upper_; }  // box
  const std::vector<std::vector<double>>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  double radius() const { return radius_; }
  // A point of the set (used to warm-start projections).
  const std::vector<double>& anchor() const { return anchor_; }

 private:
  TargetSet() = default;
  void Finish();

  Kind kind_ = Kind::kSingleton;
  int dim_ = 0;
  std::vector<double> p0_;
  std::vector<double> lower_, upper_;
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  double radius_ = 0.0;
  std::vector<double> anchor_;
  std::vector<RecessionDirection> recession_;
  bool recession_is_quadrant_ = true;
  bool bounded_ = true;
  double diameter_bound_ = 0.0;
};

bool contains(const TargetSet& set, std::span<const double> x, double tol = kMembershipTol);
double distance(const TargetSet& set, std::span<const double> x);
std::vector<double> project(const TargetSet& set, std::span<const double> x);
SupportValue support(const TargetSet& set, std::span<const double> theta);
// A maximizer of theta . s over the set. Throws ValidationError if the support
// is unbounded in direction theta.
std::vector<double> support_argmax(const TargetSet& set, std::span<const double> theta);

// lambda - Proj_{-D}(lambda) for the quadrant cone D generated by the given
// directions: the negative part of lambda along each direction is removed.
std::vector<double> steer_unbounded(std::span<const double> lambda,
                                    std::span<const RecessionDirection> recession);
// Throws ValidationError if the set's recession cone is not a quadrant.
std::vector<double> steer_unbounded(std::span<const double> lambda, const TargetSet& set);

}  // namespace rba

#endif  // RBA_SETS_H_
