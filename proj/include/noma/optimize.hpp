#pragma once

#include "noma/config.hpp"

namespace noma {

/// Minimize the stage-2 union bound over alpha1 subject to a stage-1 PER cap.
struct OptProblem {
  SystemConfig base_cfg;  // alpha1 is ignored; it is the decision variable
  double epsilon = 1e-2;
  double search_tolerance = 1e-6;
  int grid_points = 2000;

  void validate() const;
};

struct OptResult {
  double alpha_star = 0.0;
  double objective = 0.0;         // clamped union bound at alpha_star
  double constraint_value = 0.0;  // stage-1 PER at alpha_star
  bool feasible = false;
  int evaluations = 0;
};

/// Feasible alpha1 range is [kAlphaMargin, 1 - kAlphaMargin].
inline constexpr double kAlphaMargin = 1e-4;

/// Dense grid scan (no convexity assumed) followed by golden-section
/// refinement inside the bracket around the best feasible grid point.
/// Infeasible points are treated as +inf during refinement, so a constrained
/// optimum on the feasibility boundary is approached from the feasible side.
///
/// When no grid point is feasible the result has feasible = false and
/// alpha_star is the grid point with the smallest stage-1 PER.
OptResult solve_p1(const OptProblem& problem);

}  // namespace noma
