#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace stmg
{

/// Modal basis of total degree <= r on the reference cell [-1,1]^d, built
/// from tensor products of Legendre polynomials truncated to total degree r.
/// The basis is L2-orthogonal on the reference cell and its first function
/// is the constant.
class PDiscBasis
{
public:
  PDiscBasis(int r, int dim);

  int degree() const { return r_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  /// Per-direction Legendre degrees of basis function l.
  const std::array<int, 3> &exponents(int l) const { return exponents_[l]; }

  double value(int l, const Eigen::VectorXd &xi) const;
  /// Gradient with respect to the reference coordinates.
  Eigen::VectorXd gradient(int l, const Eigen::VectorXd &xi) const;

  /// Squared reference L2 norm of basis function l (the Gram diagonal).
  double gram_diagonal(int l) const;

private:
  int                               r_;
  int                               dim_;
  std::vector<std::array<int, 3>>   exponents_;
};

/// Orthogonal P_r^disc basis; r >= 1, dim in {2,3}.
PDiscBasis pdisc_basis(int r, int dim);

/// Legendre values L_0..L_n at x (recurrence evaluation).
Eigen::VectorXd legendre_values(int n, double x);
/// Legendre first derivatives L_0'..L_n' at x.
Eigen::VectorXd legendre_derivatives(int n, double x);

} // namespace stmg
