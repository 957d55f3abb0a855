#pragma once

#include "stmg/basis1d.hpp"
#include "stmg/quadrature.hpp"

#include <Eigen/Dense>

namespace stmg
{

/// Local temporal matrices of the DG(k) discretization on one subinterval
/// of length tau, in the Lagrange basis at the right Gauss-Radau points.
/// dt_plus_jump collects the time-derivative and upwind jump terms and is
/// independent of tau; mass scales linearly in tau; coupling carries the
/// handoff from the previous subinterval and is nonzero only in its last
/// column (the right endpoint is a node).
struct TemporalMatrices
{
  int             k;
  double          tau;
  Eigen::MatrixXd dt_plus_jump; // (k+1) x (k+1)
  Eigen::MatrixXd mass;         // (k+1) x (k+1)
  Eigen::MatrixXd coupling;     // (k+1) x (k+1)

  /// Reference Radau nodes in [-1,1] (last node is +1).
  Eigen::VectorXd nodes;
  /// Radau quadrature weights on [-1,1].
  Eigen::VectorXd weights;
  /// Basis values at the left endpoint limit t_{n-1}^+.
  Eigen::VectorXd left_values;

  int n_dofs() const { return k + 1; }
};

TemporalMatrices temporal_matrices(int k, double tau);

/// Endpoint value of one DG(k) step for the scalar ODE y' = lambda*y with
/// initial value y_prev. Serves as a test oracle against Radau IIA.
double dg_ode_step(int k, double tau, double lambda, double y_prev);

} // namespace stmg
