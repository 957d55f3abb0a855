#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stmg/vanka.hpp"

#include <algorithm>
#include <random>

using namespace stmg;

namespace
{
  const Box unit{0.0, 0.0, 1.0, 1.0};

  BlockVector
  random_interior(const SpaceTimeBlockOperator &op, std::mt19937 &rng)
  {
    BlockVector                            x = op.make_vector();
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x.flat()(i) = dist(rng);
    for (int a = 0; a < x.n_slots(); ++a)
      op.velocity_space().zero_constrained(x.velocity(a));
    return x;
  }
} // namespace

TEST_CASE("cell patch block sizes")
{
  // interior cell of a 4x4 mesh, r=1, k=1: 2*(18+3) = 42 dofs; the nominal
  // block-size formula with (r+1)^d pressure dofs gives 44.
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 3);
  const VelocitySpace  vs(mesh, 2, 1);
  const PressureSpace  ps(mesh, 2, 1);
  const TemporalMatrices tm = temporal_matrices(1, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);

  const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);
  REQUIRE(smoother.patches().size() == 16);
  const int interior_cell = mesh.cell_index(2, 1, 1);
  CHECK(smoother.patches()[interior_cell].size() == 42);
  CHECK(VankaSmoother::nominal_block_size(1, 1, 2) == 44);

  // dof lists sorted and duplicate-free
  for (const auto &patch : smoother.patches())
    {
      CHECK(std::is_sorted(patch.dofs.begin(), patch.dofs.end()));
      CHECK(std::adjacent_find(patch.dofs.begin(), patch.dofs.end()) ==
            patch.dofs.end());
    }
}

TEST_CASE("vertex star patch sizes")
{
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 4);
  const VelocitySpace  vs(mesh, 3, 1); // 8x8 cells
  const PressureSpace  ps(mesh, 3, 1);
  const TemporalMatrices tm = temporal_matrices(1, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);

  const VankaSmoother smoother =
    VankaSmoother::build(op, SmootherKind::vertex_star);
  REQUIRE(smoother.patches().size() == 81);

  // interior vertex away from the boundary: 2*(5^2) velocity + 4*3 pressure
  // dofs per slot -> 2*(50+12) = 124
  const int vi = mesh.vertex_index(3, 4, 4);
  CHECK(smoother.patches()[vi].size() == 124);

  // corner vertex patch equals the corner cell patch
  const VankaSmoother cells = VankaSmoother::build(op, SmootherKind::cell);
  const int           corner_vertex = mesh.vertex_index(3, 0, 0);
  const int           corner_cell   = mesh.cell_index(3, 0, 0);
  CHECK(smoother.patches()[corner_vertex].dofs ==
        cells.patches()[corner_cell].dofs);
}

TEST_CASE("patch union covers every unconstrained dof")
{
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 3);
  const VelocitySpace  vs(mesh, 2, 2);
  const PressureSpace  ps(mesh, 2, 2);
  const TemporalMatrices tm = temporal_matrices(2, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);

  for (const SmootherKind kind : {SmootherKind::cell, SmootherKind::vertex_star})
    {
      const VankaSmoother smoother = VankaSmoother::build(op, kind);
      std::vector<char> covered(op.make_vector().size(), 0);
      for (const auto &patch : smoother.patches())
        for (const Eigen::Index d : patch.dofs)
          covered[d] = 1;
      const int ns = op.n_slots();
      for (int a = 0; a < ns; ++a)
        {
          for (int comp = 0; comp < 2; ++comp)
            for (int s = 0; s < vs.n_scalar_dofs(); ++s)
              {
                const Eigen::Index flat =
                  a * vs.n_dofs() + comp * vs.n_scalar_dofs() + s;
                CHECK(static_cast<bool>(covered[flat]) ==
                      !vs.scalar_on_boundary(s));
              }
          for (int l = 0; l < ps.n_dofs(); ++l)
            CHECK(covered[ns * vs.n_dofs() + a * ps.n_dofs() + l] == 1);
        }
    }
}

TEST_CASE("additive sweep equals the dense oracle")
{
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 2);
  std::mt19937         rng(3);
  for (const SmootherKind kind : {SmootherKind::cell, SmootherKind::vertex_star})
    for (const int r : {1, 2})
      {
        const VelocitySpace  vs(mesh, 1, r);
        const PressureSpace  ps(mesh, 1, r);
        const TemporalMatrices tm = temporal_matrices(1, 0.25);
        const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);
        const VankaSmoother smoother = VankaSmoother::build(op, kind);

        const Eigen::MatrixXd dense =
          Eigen::MatrixXd(op.assemble_sparse_oracle());
        const BlockVector b = random_interior(op, rng);
        BlockVector       swept = op.make_vector();
        smoother.apply_additive(b, swept);

        Eigen::VectorXd ref = Eigen::VectorXd::Zero(b.size());
        for (const auto &patch : smoother.patches())
          {
            const int       n_t = patch.size();
            Eigen::MatrixXd local(n_t, n_t);
            Eigen::VectorXd rloc(n_t);
            for (int i = 0; i < n_t; ++i)
              {
                rloc(i) = b.flat()(patch.dofs[i]);
                for (int j = 0; j < n_t; ++j)
                  local(i, j) = dense(patch.dofs[i], patch.dofs[j]);
              }
            // min-norm solve handles the whole-domain patches whose local
            // matrices carry the constant-pressure nullspace
            const Eigen::VectorXd sol =
              local.completeOrthogonalDecomposition().solve(rloc);
            for (int i = 0; i < n_t; ++i)
              ref(patch.dofs[i]) += patch.weights(i) * sol(i);
          }
        CHECK((swept.flat() - ref).norm() < 1e-11 * ref.norm());
      }
}

TEST_CASE("single-patch problem: sweep is the exact solve")
{
  // one interior-rich cell: 1x1 mesh; the only cell patch covers every
  // unconstrained dof, so the sweep inverts the constrained operator.
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 1);
  const VelocitySpace  vs(mesh, 0, 2);
  const PressureSpace  ps(mesh, 0, 2);
  const TemporalMatrices tm = temporal_matrices(1, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);
  const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);
  REQUIRE(smoother.patches().size() == 1);

  std::mt19937 rng(5);
  BlockVector  x = random_interior(op, rng);
  // the whole-domain patch determines the pressure only up to per-slot
  // constants; compare against the mean-zero representative
  for (int a = 0; a < x.n_slots(); ++a)
    ps.project_mean_zero(x.pressure(a));
  BlockVector b = op.make_vector();
  op.apply_block(x, b);
  BlockVector solved = op.make_vector();
  smoother.apply_additive(b, solved);
  CHECK((solved.flat() - x.flat()).norm() < 1e-10 * x.flat().norm());

  // zero residual stays zero
  BlockVector zero = op.make_vector();
  BlockVector out  = op.make_vector();
  smoother.apply_additive(zero, out);
  CHECK(out.flat().norm() == 0.0);
}

TEST_CASE("smooth_step: fixed point at the solution, omega validation")
{
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 2);
  const VelocitySpace  vs(mesh, 1, 1);
  const PressureSpace  ps(mesh, 1, 1);
  const TemporalMatrices tm = temporal_matrices(1, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);
  const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);

  std::mt19937 rng(7);
  BlockVector  u = random_interior(op, rng);
  BlockVector  b = op.make_vector();
  op.apply_block(u, b);
  BlockVector u2 = u;
  smoother.smooth_step(op, b, u2, 0.8);
  CHECK((u2.flat() - u.flat()).norm() < 1e-12 * u.flat().norm());

  CHECK_THROWS_AS(smoother.smooth_step(op, b, u2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(smoother.smooth_step(op, b, u2, 1.5), std::invalid_argument);
}

TEST_CASE("error propagation: spectral radius below one on the mean-zero subspace")
{
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 2);
  const VelocitySpace  vs(mesh, 1, 1);
  const PressureSpace  ps(mesh, 1, 1);
  const TemporalMatrices tm = temporal_matrices(1, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);
  const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);
  const double        omega    = 0.8;

  // dense error propagation G = Pi (I - omega P S) Pi restricted to the
  // unconstrained dofs, with Pi the per-slot pressure mean projector (the
  // constant-pressure direction is invariant by construction).
  const Eigen::Index n = op.make_vector().size();
  Eigen::MatrixXd    g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    {
      BlockVector e = op.make_vector();
      e.flat()(j)   = 1.0;
      for (int a = 0; a < e.n_slots(); ++a)
        {
          vs.zero_constrained(e.velocity(a));
          ps.project_mean_zero(e.pressure(a));
        }
      BlockVector se = op.make_vector();
      op.apply_block(e, se);
      BlockVector pse = op.make_vector();
      smoother.apply_additive(se, pse);
      pse *= -omega;
      pse += e;
      for (int a = 0; a < pse.n_slots(); ++a)
        {
          vs.zero_constrained(pse.velocity(a));
          ps.project_mean_zero(pse.pressure(a));
        }
      g.col(j) = pse.flat();
    }
  const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(g, false)
                                 .eigenvalues();
  double rho = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i)
    rho = std::max(rho, std::abs(eig(i)));
  CHECK(rho < 1.0);
}

TEST_CASE("complexity accounting: local solve mult-adds near sum of n_T^2")
{
  const Mesh           mesh = Mesh::build_cartesian(unit, 1, 1, 2);
  const VelocitySpace  vs(mesh, 1, 2);
  const PressureSpace  ps(mesh, 1, 2);
  const TemporalMatrices tm = temporal_matrices(1, 0.25);
  const SpaceTimeBlockOperator op(vs, ps, tm, 0.1);
  const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);

  smoother.reset_mult_adds();
  BlockVector b = op.make_vector();
  b.flat().setOnes();
  BlockVector out = op.make_vector();
  smoother.apply_additive(b, out);
  const std::uint64_t nt2 = smoother.total_matrix_elements();
  CHECK(smoother.mult_adds() >= nt2 / 2);
  CHECK(smoother.mult_adds() <= 2 * nt2);
}
