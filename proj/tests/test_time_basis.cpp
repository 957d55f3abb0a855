#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stmg/time_basis.hpp"

#include <cmath>

using namespace stmg;

namespace
{
  // Stability function of the (s-1, s) Pade approximant to exp(z), which is
  // the stability function of the s-stage Radau IIA method. Serves as the
  // independent oracle for the DG endpoint value.
  double
  radau_iia_stability(int s, double z)
  {
    const int m = s - 1, n = s;
    const auto factorial = [](int v) {
      double f = 1.0;
      for (int i = 2; i <= v; ++i)
        f *= i;
      return f;
    };
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= m; ++j)
      num += factorial(m) * factorial(m + n - j) /
             (factorial(m + n) * factorial(j) * factorial(m - j)) * std::pow(z, j);
    for (int j = 0; j <= n; ++j)
      den += factorial(n) * factorial(m + n - j) /
             (factorial(m + n) * factorial(j) * factorial(n - j)) * std::pow(-z, j);
    return num / den;
  }
} // namespace

TEST_CASE("temporal matrices k=0 reduce to backward Euler")
{
  const double           tau = 0.37;
  const TemporalMatrices tm  = temporal_matrices(0, tau);
  CHECK(tm.dt_plus_jump(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tm.mass(0, 0) == doctest::Approx(tau).epsilon(1e-14));
  CHECK(tm.coupling(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("temporal matrices invariants")
{
  for (const int k : {1, 2, 3})
    for (const double tau : {0.3, 2.2})
      {
        const TemporalMatrices tm = temporal_matrices(k, tau);

        // mass SPD and tau-linear
        const Eigen::MatrixXd sym = tm.mass - tm.mass.transpose();
        CHECK(sym.norm() < 1e-14 * tm.mass.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tm.mass);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(tm.mass.sum() == doctest::Approx(tau).epsilon(1e-13));

        // dt+jump independent of tau, entries sum to 1
        const TemporalMatrices ref = temporal_matrices(k, 1.0);
        CHECK((tm.dt_plus_jump - ref.dt_plus_jump).norm() < 1e-13);
        CHECK(tm.dt_plus_jump.sum() == doctest::Approx(1.0).epsilon(1e-12));

        // coupling is rank one: only the last column nonzero
        for (int a = 0; a <= k; ++a)
          for (int b = 0; b < k; ++b)
            CHECK(tm.coupling(a, b) == 0.0);
        for (int a = 0; a <= k; ++a)
          CHECK(tm.coupling(a, k) == doctest::Approx(tm.left_values(a)));
      }

  CHECK_THROWS_AS(temporal_matrices(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(temporal_matrices(1, -1.0), std::invalid_argument);
}

TEST_CASE("dg_ode_step small cases")
{
  // k=0: backward Euler
  CHECK(dg_ode_step(0, 0.1, -1.0, 1.0) == doctest::Approx(1.0 / 1.1).epsilon(1e-14));

  // k=1: two-stage Radau IIA stability function at z = -0.1
  const double z  = -0.1;
  const double r2 = (1.0 + z / 3.0) / (1.0 - 2.0 * z / 3.0 + z * z / 6.0);
  CHECK(dg_ode_step(1, 0.1, -1.0, 1.0) == doctest::Approx(r2).epsilon(1e-13));

  // lambda = 0 preserves constants for all k
  for (int k = 0; k <= 4; ++k)
    CHECK(dg_ode_step(k, 0.5, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));

  // lambda*tau at a pole of the stability function
  CHECK_THROWS_AS(dg_ode_step(0, 1.0, 1.0, 1.0), std::runtime_error);
}

TEST_CASE("DG(k) endpoint equals Radau IIA stability function")
{
  for (int k = 0; k <= 3; ++k)
    for (const double z : {-0.1, -0.5, -1.0, -4.0})
      {
        const double tau = 1.0; // z = lambda * tau with tau = 1
        const double dg  = dg_ode_step(k, tau, z, 1.0);
        const double rk  = radau_iia_stability(k + 1, z);
        CHECK(dg == doctest::Approx(rk).epsilon(1e-12));
      }
}

TEST_CASE("DG(k) endpoint superconvergence order 2k+1")
{
  const double lambda = -1.0;
  for (const int k : {1, 2})
    {
      double errors[3];
      int    idx = 0;
      for (const int n : {2, 4, 8})
        {
          const double tau = 1.0 / n;
          double       y   = 1.0;
          for (int i = 0; i < n; ++i)
            y = dg_ode_step(k, tau, lambda, y);
          errors[idx++] = std::abs(y - std::exp(lambda));
        }
      const double eoc1 = std::log2(errors[0] / errors[1]);
      const double eoc2 = std::log2(errors[1] / errors[2]);
      CHECK(eoc1 == doctest::Approx(2 * k + 1).epsilon(0.3 / (2 * k + 1)));
      CHECK(eoc2 == doctest::Approx(2 * k + 1).epsilon(0.3 / (2 * k + 1)));
    }
}
