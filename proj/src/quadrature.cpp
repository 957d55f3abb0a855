#include "stmg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace stmg
{

namespace
{
  // Nodes and first-eigenvector weights of a symmetric tridiagonal Jacobi
  // matrix (Golub-Welsch). diag has size n, offdiag size n-1, mu0 is the
  // zeroth moment of the weight function.
  QuadratureRule
  golub_welsch(const Eigen::VectorXd &diag,
               const Eigen::VectorXd &offdiag,
               double                 mu0)
  {
    const int       n = static_cast<int>(diag.size());
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      jacobi(i, i) = diag(i);
    for (int i = 0; i + 1 < n; ++i)
      {
        jacobi(i, i + 1) = offdiag(i);
        jacobi(i + 1, i) = offdiag(i);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    QuadratureRule                                 rule;
    rule.points  = es.eigenvalues();
    rule.weights = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i)
      {
        const double v0 = es.eigenvectors()(0, i);
        rule.weights(i) = mu0 * v0 * v0;
      }
    return rule;
  }

  // Recurrence coefficients beta_k = k^2 / (4k^2 - 1) of monic Legendre
  // polynomials, k = 1, ..., n-1.
  Eigen::VectorXd
  legendre_beta(int n)
  {
    Eigen::VectorXd beta(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k)
      beta(k - 1) = static_cast<double>(k) * k / (4.0 * k * k - 1.0);
    return beta;
  }
} // namespace

QuadratureRule
gauss_rule(int n)
{
  if (n < 1)
    throw std::invalid_argument("gauss_rule: n must be >= 1");
  if (n == 1)
    {
      QuadratureRule rule;
      rule.points  = Eigen::VectorXd::Zero(1);
      rule.weights = Eigen::VectorXd::Constant(1, 2.0);
      return rule;
    }
  const Eigen::VectorXd beta = legendre_beta(n);
  return golub_welsch(Eigen::VectorXd::Zero(n), beta.array().sqrt(), 2.0);
}

QuadratureRule
gauss_radau_right(int n)
{
  if (n < 1)
    throw std::invalid_argument("gauss_radau_right: n must be >= 1");
  if (n == 1)
    {
      QuadratureRule rule;
      rule.points  = Eigen::VectorXd::Constant(1, 1.0);
      rule.weights = Eigen::VectorXd::Constant(1, 2.0);
      return rule;
    }
  // Modified Jacobi matrix with the last diagonal entry chosen so that +1
  // becomes an eigenvalue: alpha_n = 1 - beta_{n-1} pi_{n-2}(1)/pi_{n-1}(1)
  // with monic Legendre pi_k.
  const Eigen::VectorXd beta = legendre_beta(n);
  double                pi_prev = 1.0; // pi_0(1)
  double                pi_cur  = 1.0; // pi_1(1) = 1
  for (int k = 1; k < n - 1; ++k)
    {
      const double pi_next = pi_cur - beta(k - 1) * pi_prev;
      pi_prev              = pi_cur;
      pi_cur               = pi_next;
    }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  diag(n - 1)          = 1.0 - beta(n - 2) * pi_prev / pi_cur;

  QuadratureRule rule = golub_welsch(diag, beta.array().sqrt(), 2.0);
  // The largest node is +1 up to roundoff; pin it exactly.
  rule.points(n - 1) = 1.0;
  return rule;
}

Eigen::VectorXd
gauss_lobatto_points(int n)
{
  if (n < 2)
    throw std::invalid_argument("gauss_lobatto_points: n must be >= 2");
  Eigen::VectorXd nodes(n);
  nodes(0)     = -1.0;
  nodes(n - 1) = 1.0;
  const int n_int = n - 2;
  if (n_int > 0)
    {
      // Interior nodes are the roots of P'_{n-1}, i.e. the Gauss nodes of
      // the Jacobi(1,1) weight.
      Eigen::VectorXd beta(std::max(n_int - 1, 0));
      for (int k = 1; k < n_int; ++k)
        beta(k - 1) =
          static_cast<double>(k) * (k + 2) / ((2.0 * k + 1) * (2.0 * k + 3));
      const QuadratureRule interior =
        golub_welsch(Eigen::VectorXd::Zero(n_int), beta.array().sqrt(), 4.0 / 3.0);
      nodes.segment(1, n_int) = interior.points;
    }
  // Symmetrize against roundoff.
  for (int i = 0; i < n / 2; ++i)
    {
      const double v   = 0.5 * (nodes(i) - nodes(n - 1 - i));
      nodes(i)         = v;
      nodes(n - 1 - i) = -v;
    }
  if (n % 2 == 1)
    nodes(n / 2) = 0.0;
  return nodes;
}

} // namespace stmg
