#include "stmg/pdisc.hpp"

#include <stdexcept>

namespace stmg
{

Eigen::VectorXd
legendre_values(int n, double x)
{
  Eigen::VectorXd v(n + 1);
  v(0) = 1.0;
  if (n >= 1)
    v(1) = x;
  for (int k = 1; k < n; ++k)
    v(k + 1) = ((2.0 * k + 1) * x * v(k) - k * v(k - 1)) / (k + 1);
  return v;
}

Eigen::VectorXd
legendre_derivatives(int n, double x)
{
  const Eigen::VectorXd v = legendre_values(n, x);
  Eigen::VectorXd       d(n + 1);
  d(0) = 0.0;
  if (n >= 1)
    d(1) = 1.0;
  for (int k = 1; k < n; ++k)
    d(k + 1) = (2.0 * k + 1) * v(k) + d(k - 1);
  return d;
}

PDiscBasis::PDiscBasis(int r, int dim)
  : r_(r)
  , dim_(dim)
{
  if (r < 1)
    throw std::invalid_argument("PDiscBasis: degree r must be >= 1");
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("PDiscBasis: dim must be 2 or 3");
  // Degree-major ordering, the constant first.
  for (int deg = 0; deg <= r; ++deg)
    {
      if (dim == 2)
        {
          for (int a = deg; a >= 0; --a)
            exponents_.push_back({a, deg - a, 0});
        }
      else
        {
          for (int a = deg; a >= 0; --a)
            for (int b = deg - a; b >= 0; --b)
              exponents_.push_back({a, b, deg - a - b});
        }
    }
}

double
PDiscBasis::value(int l, const Eigen::VectorXd &xi) const
{
  const auto &e = exponents_[l];
  double      v = 1.0;
  for (int d = 0; d < dim_; ++d)
    v *= legendre_values(e[d], xi(d))(e[d]);
  return v;
}

Eigen::VectorXd
PDiscBasis::gradient(int l, const Eigen::VectorXd &xi) const
{
  const auto &    e = exponents_[l];
  Eigen::VectorXd vals(dim_), ders(dim_);
  for (int d = 0; d < dim_; ++d)
    {
      vals(d) = legendre_values(e[d], xi(d))(e[d]);
      ders(d) = legendre_derivatives(e[d], xi(d))(e[d]);
    }
  Eigen::VectorXd g(dim_);
  for (int d = 0; d < dim_; ++d)
    {
      double v = ders(d);
      for (int c = 0; c < dim_; ++c)
        if (c != d)
          v *= vals(c);
      g(d) = v;
    }
  return g;
}

double
PDiscBasis::gram_diagonal(int l) const
{
  const auto &e = exponents_[l];
  double      v = 1.0;
  for (int d = 0; d < dim_; ++d)
    v *= 2.0 / (2.0 * e[d] + 1.0);
  return v;
}

PDiscBasis
pdisc_basis(int r, int dim)
{
  return PDiscBasis(r, dim);
}

} // namespace stmg
