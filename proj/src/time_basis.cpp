#include "stmg/time_basis.hpp"

#include <stdexcept>

namespace stmg
{

TemporalMatrices
temporal_matrices(int k, double tau)
{
  if (k < 0)
    throw std::invalid_argument("temporal_matrices: k must be >= 0");
  if (!(tau > 0.0))
    throw std::invalid_argument("temporal_matrices: tau must be positive");

  const int            n = k + 1;
  const QuadratureRule radau = gauss_radau_right(n);
  const NodalBasis1D   basis(radau.points);

  TemporalMatrices tm;
  tm.k       = k;
  tm.tau     = tau;
  tm.nodes   = radau.points;
  tm.weights = radau.weights;

  // The Radau rule integrates the mass (degree 2k) and derivative products
  // (degree 2k-1) exactly.
  const Eigen::MatrixXd phi  = basis.value_table(radau.points);
  const Eigen::MatrixXd dphi = basis.derivative_table(radau.points);

  tm.mass         = Eigen::MatrixXd::Zero(n, n);
  tm.dt_plus_jump = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      {
        double m = 0.0, kd = 0.0;
        for (int q = 0; q < n; ++q)
          {
            m += radau.weights(q) * phi(q, b) * phi(q, a);
            kd += radau.weights(q) * dphi(q, b) * phi(q, a);
          }
        // Physical scaling: dt and the measure cancel, the mass keeps tau/2.
        tm.mass(a, b)         = 0.5 * tau * m;
        tm.dt_plus_jump(a, b) = kd;
      }

  tm.left_values = basis.values(-1.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      tm.dt_plus_jump(a, b) += tm.left_values(b) * tm.left_values(a);

  // With the right endpoint among the nodes, the neighbor trace
  // phi_{n-1}^b(t_{n-1}) is delta_{b,k+1}, so only the last column remains.
  tm.coupling = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    tm.coupling(a, n - 1) = tm.left_values(a);

  return tm;
}

double
dg_ode_step(int k, double tau, double lambda, double y_prev)
{
  const TemporalMatrices tm = temporal_matrices(k, tau);
  const int              n  = k + 1;

  const Eigen::MatrixXd sys = tm.dt_plus_jump - lambda * tm.mass;
  const Eigen::VectorXd rhs = tm.coupling.col(n - 1) * y_prev;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  if (!lu.isInvertible())
    throw std::runtime_error("dg_ode_step: singular temporal system");
  const Eigen::VectorXd y = lu.solve(rhs);
  return y(n - 1);
}

} // namespace stmg
