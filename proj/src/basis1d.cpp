#include "stmg/basis1d.hpp"

#include <stdexcept>
#include <utility>

namespace stmg
{

NodalBasis1D::NodalBasis1D(Eigen::VectorXd nodes)
  : nodes_(std::move(nodes))
{
  if (nodes_.size() < 1)
    throw std::invalid_argument("NodalBasis1D: empty node set");
  for (int i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_(i) < nodes_(i + 1)))
      throw std::invalid_argument("NodalBasis1D: nodes must be strictly increasing");
}

double
NodalBasis1D::value(int i, double x) const
{
  double v = 1.0;
  for (int j = 0; j < nodes_.size(); ++j)
    if (j != i)
      v *= (x - nodes_(j)) / (nodes_(i) - nodes_(j));
  return v;
}

double
NodalBasis1D::derivative(int i, double x) const
{
  // d/dx l_i(x) = sum_{m != i} 1/(x_i - x_m) prod_{j != i,m} (x-x_j)/(x_i-x_j)
  double d = 0.0;
  for (int m = 0; m < nodes_.size(); ++m)
    {
      if (m == i)
        continue;
      double term = 1.0 / (nodes_(i) - nodes_(m));
      for (int j = 0; j < nodes_.size(); ++j)
        if (j != i && j != m)
          term *= (x - nodes_(j)) / (nodes_(i) - nodes_(j));
      d += term;
    }
  return d;
}

Eigen::VectorXd
NodalBasis1D::values(double x) const
{
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i)
    v(i) = value(i, x);
  return v;
}

Eigen::VectorXd
NodalBasis1D::derivatives(double x) const
{
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i)
    v(i) = derivative(i, x);
  return v;
}

Eigen::MatrixXd
NodalBasis1D::value_table(const Eigen::VectorXd &points) const
{
  Eigen::MatrixXd table(points.size(), size());
  for (int q = 0; q < points.size(); ++q)
    table.row(q) = values(points(q)).transpose();
  return table;
}

Eigen::MatrixXd
NodalBasis1D::derivative_table(const Eigen::VectorXd &points) const
{
  Eigen::MatrixXd table(points.size(), size());
  for (int q = 0; q < points.size(); ++q)
    table.row(q) = derivatives(points(q)).transpose();
  return table;
}

NodalBasis1D
lagrange_basis(const Eigen::VectorXd &nodes)
{
  return NodalBasis1D(nodes);
}

} // namespace stmg
