#pragma once

#include "stmg/solver.hpp"

#include <functional>

namespace stmg
{

/// Closed forms of an exact Stokes solution for error evaluation.
struct ExactSolution
{
  /// velocity(x, y, t, comp)
  std::function<double(double, double, double, int)> velocity;
  /// d velocity_comp / d x_deriv at (x, y, t)
  std::function<double(double, double, double, int, int)> velocity_gradient;
  /// pressure(x, y, t)
  std::function<double(double, double, double)> pressure;
};

/// A full problem setup on [0,1]^2 x (0, t_end].
struct StokesProblem
{
  double           nu    = 0.1;
  double           t_end = 1.0;
  TimeMarchProblem data;
  ExactSolution    exact; // functions may be empty when no closed form exists
  bool             has_exact = false;
};

/// The divergence-free manufactured solution with nu = 0.1 on
/// [0,1]^2 x (0,1]: v and p are product sinusoids, the force is their exact
/// Stokes residual, and v vanishes on the boundary and at t = 0.
StokesProblem manufactured_problem();

/// Lid-driven cavity on [0,1]^2 x (0,8]: lid velocity (sin(pi t/4), 0) on
/// y = 1 with no-slip walls; corners belong to the walls.
StokesProblem cavity_problem(double nu);

} // namespace stmg
