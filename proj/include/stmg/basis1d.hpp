#pragma once

#include <Eigen/Dense>

namespace stmg
{

/// Nodal Lagrange basis on a set of strictly increasing 1D nodes.
class NodalBasis1D
{
public:
  explicit NodalBasis1D(Eigen::VectorXd nodes);

  int degree() const { return static_cast<int>(nodes_.size()) - 1; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd &nodes() const { return nodes_; }

  double value(int i, double x) const;
  double derivative(int i, double x) const;

  /// Values of all basis functions at x.
  Eigen::VectorXd values(double x) const;
  Eigen::VectorXd derivatives(double x) const;

  /// Evaluation tables: row q, column i holds basis_i(points[q]).
  Eigen::MatrixXd value_table(const Eigen::VectorXd &points) const;
  Eigen::MatrixXd derivative_table(const Eigen::VectorXd &points) const;

private:
  Eigen::VectorXd nodes_;
};

/// Lagrange basis on the given nodes; rejects duplicate or unsorted nodes.
NodalBasis1D lagrange_basis(const Eigen::VectorXd &nodes);

} // namespace stmg
