#pragma once

#include <Eigen/Dense>

namespace stmg
{

/// One-dimensional quadrature rule on the reference interval [-1, 1].
struct QuadratureRule
{
  Eigen::VectorXd points;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_rule(int n);

/// Right-sided n-point Gauss-Radau rule with fixed endpoint +1,
/// exact for polynomials of degree <= 2n-2.
QuadratureRule gauss_radau_right(int n);

/// Gauss-Lobatto points for n >= 2 nodes, including both endpoints.
/// Used as interpolation nodes; no weights are required.
Eigen::VectorXd gauss_lobatto_points(int n);

} // namespace stmg
