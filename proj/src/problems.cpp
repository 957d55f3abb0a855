#include "stmg/problems.hpp"

#include <cmath>

namespace stmg
{

namespace
{
  constexpr double PI = 3.14159265358979323846;
}

StokesProblem
manufactured_problem()
{
  StokesProblem problem;
  problem.nu        = 0.1;
  problem.t_end     = 1.0;
  problem.has_exact = true;

  const double nu = problem.nu;

  // v1 =  sin(t)/4 (1 - cos 2 pi x) sin 2 pi y
  // v2 = -sin(t)/4 sin 2 pi x (1 - cos 2 pi y)
  // p  =  sin(t)/4 sin 2 pi x sin 2 pi y
  problem.exact.velocity = [](double x, double y, double t, int comp) {
    const double cx = std::cos(2 * PI * x), sx = std::sin(2 * PI * x);
    const double cy = std::cos(2 * PI * y), sy = std::sin(2 * PI * y);
    const double s = 0.25 * std::sin(t);
    return comp == 0 ? s * (1.0 - cx) * sy : -s * sx * (1.0 - cy);
  };
  problem.exact.velocity_gradient =
    [](double x, double y, double t, int comp, int deriv) {
      const double cx = std::cos(2 * PI * x), sx = std::sin(2 * PI * x);
      const double cy = std::cos(2 * PI * y), sy = std::sin(2 * PI * y);
      const double s = 0.5 * PI * std::sin(t);
      if (comp == 0)
        return deriv == 0 ? s * sx * sy : s * (1.0 - cx) * cy;
      return deriv == 0 ? -s * cx * (1.0 - cy) : -s * sx * sy;
    };
  problem.exact.pressure = [](double x, double y, double t) {
    return 0.25 * std::sin(t) * std::sin(2 * PI * x) * std::sin(2 * PI * y);
  };

  // f = dt v - nu Laplace v + grad p, differentiated by hand from the
  // closed forms above.
  problem.data.force = [nu](double x, double y, double t, int comp) {
    const double cx = std::cos(2 * PI * x), sx = std::sin(2 * PI * x);
    const double cy = std::cos(2 * PI * y), sy = std::sin(2 * PI * y);
    const double st = std::sin(t), ct = std::cos(t);
    if (comp == 0)
      return 0.25 * ct * (1.0 - cx) * sy -
             nu * st * PI * PI * sy * (2.0 * cx - 1.0) +
             0.5 * PI * st * cx * sy;
    return -0.25 * ct * sx * (1.0 - cy) -
           nu * st * PI * PI * sx * (1.0 - 2.0 * cy) +
           0.5 * PI * st * sx * cy;
  };
  // Zero initial velocity and homogeneous Dirichlet data: leave the boundary
  // and initial-value hooks empty.
  return problem;
}

StokesProblem
cavity_problem(double nu)
{
  StokesProblem problem;
  problem.nu        = nu;
  problem.t_end     = 8.0;
  problem.has_exact = false;

  problem.data.boundary = [](double x, double y, double t, int comp) {
    if (comp == 0 && y >= 1.0 && x > 0.0 && x < 1.0)
      return std::sin(0.25 * PI * t);
    return 0.0;
  };
  return problem;
}

} // namespace stmg
