#include "stmg/vanka.hpp"

#include <algorithm>
#include <stdexcept>

namespace stmg
{

namespace
{
  std::vector<std::vector<int>>
  patch_cell_sets(const Mesh &mesh, int level, SmootherKind kind)
  {
    std::vector<std::vector<int>> sets;
    if (kind == SmootherKind::cell)
      {
        sets.reserve(mesh.n_cells(level));
        for (int cell = 0; cell < mesh.n_cells(level); ++cell)
          sets.push_back({cell});
      }
    else
      {
        for (const auto &patch : mesh.enumerate_vertex_star_patches(level))
          sets.push_back(patch.cells);
      }
    return sets;
  }
} // namespace

VankaSmoother
VankaSmoother::build(const SpaceTimeBlockOperator &op, SmootherKind kind)
{
  const VelocitySpace &vs  = op.velocity_space();
  const PressureSpace &ps  = op.pressure_space();
  const Mesh &         mesh = vs.mesh();
  const int            level = vs.level();
  const int            ns   = op.n_slots();
  const Eigen::Index   mv   = vs.n_dofs();
  const Eigen::Index   mp   = ps.n_dofs();
  const int            nsc  = vs.n_scalar_dofs();
  const int            nv   = vs.nodes_per_dir() * vs.nodes_per_dir();
  const int            np   = ps.dofs_per_cell();

  const ElementMatrices &elem  = op.element_matrices();
  const Eigen::MatrixXd &kt    = op.temporal().dt_plus_jump;
  const Eigen::MatrixXd &mt    = op.temporal().mass;
  const double           nu    = op.viscosity();
  const double           gamma = op.grad_div_coefficient();

  const auto voff = [&](int a) { return static_cast<Eigen::Index>(a) * mv; };
  const auto poff = [&](int a) {
    return static_cast<Eigen::Index>(ns) * mv + static_cast<Eigen::Index>(a) * mp;
  };

  VankaSmoother smoother;
  smoother.kind_ = kind;

  const auto cell_sets = patch_cell_sets(mesh, level, kind);
  smoother.patches_.resize(cell_sets.size());

  // Flat-index -> local patch position, reused across patches.
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(ns) * (mv + mp), -1);

  for (std::size_t ip = 0; ip < cell_sets.size(); ++ip)
    {
      const auto &cells = cell_sets[ip];
      auto &      patch = smoother.patches_[ip];

      // Velocity dofs of the member cells, deduplicated, without constrained
      // dofs; all pressure dofs of the member cells are interior.
      std::vector<int> scalars;
      for (const int cell : cells)
        for (const int s : vs.cell_scalar_dofs(cell))
          if (!vs.scalar_on_boundary(s))
            scalars.push_back(s);
      std::sort(scalars.begin(), scalars.end());
      scalars.erase(std::unique(scalars.begin(), scalars.end()), scalars.end());

      for (int a = 0; a < ns; ++a)
        for (int comp = 0; comp < 2; ++comp)
          for (const int s : scalars)
            patch.dofs.push_back(voff(a) + comp * nsc + s);
      for (int a = 0; a < ns; ++a)
        for (const int cell : cells)
          for (int l = 0; l < np; ++l)
            patch.dofs.push_back(poff(a) + ps.cell_dof(cell, l));

      const int n_t = patch.size();
      for (int i = 0; i < n_t; ++i)
        pos[patch.dofs[i]] = i;

      // Assemble R_T S R_T^T from the element matrices over every cell whose
      // shape functions overlap the patch.
      std::vector<int> contrib;
      for (const int cell : cells)
        for (const int nb : mesh.vertex_neighbors(level, cell))
          contrib.push_back(nb);
      std::sort(contrib.begin(), contrib.end());
      contrib.erase(std::unique(contrib.begin(), contrib.end()), contrib.end());

      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n_t, n_t);
      std::vector<Eigen::Index> vpos(static_cast<std::size_t>(ns) * 2 * nv);
      std::vector<Eigen::Index> ppos(static_cast<std::size_t>(ns) * np);
      for (const int cell : contrib)
        {
          const auto &dofs  = vs.cell_scalar_dofs(cell);
          const int   pbase = ps.cell_dof(cell, 0);
          for (int a = 0; a < ns; ++a)
            {
              for (int comp = 0; comp < 2; ++comp)
                for (int i = 0; i < nv; ++i)
                  vpos[(a * 2 + comp) * nv + i] =
                    vs.scalar_on_boundary(dofs[i]) ?
                      -1 :
                      pos[voff(a) + comp * nsc + dofs[i]];
              for (int l = 0; l < np; ++l)
                ppos[a * np + l] = pos[poff(a) + pbase + l];
            }

          for (int a = 0; a < ns; ++a)
            for (int b = 0; b < ns; ++b)
              {
                const double ck = kt(a, b);
                const double cm = nu * mt(a, b);
                const double cg = gamma * mt(a, b);
                const double cb = mt(a, b);
                for (int ci = 0; ci < 2; ++ci)
                  for (int i = 0; i < nv; ++i)
                    {
                      const Eigen::Index row = vpos[(a * 2 + ci) * nv + i];
                      if (row < 0)
                        continue;
                      for (int cj = 0; cj < 2; ++cj)
                        for (int j = 0; j < nv; ++j)
                          {
                            const Eigen::Index col = vpos[(b * 2 + cj) * nv + j];
                            if (col < 0)
                              continue;
                            double val =
                              cg * elem.grad_div(ci * nv + i, cj * nv + j);
                            if (ci == cj)
                              val += ck * elem.mass(i, j) + cm * elem.laplace(i, j);
                            local(row, col) += val;
                          }
                    }
                for (int l = 0; l < np; ++l)
                  {
                    const Eigen::Index prow = ppos[a * np + l];
                    const Eigen::Index pcol = ppos[b * np + l];
                    for (int comp = 0; comp < 2; ++comp)
                      for (int j = 0; j < nv; ++j)
                        {
                          const double bval = elem.div(l, comp * nv + j);
                          if (bval == 0.0)
                            continue;
                          const Eigen::Index vr = vpos[(a * 2 + comp) * nv + j];
                          const Eigen::Index vc = vpos[(b * 2 + comp) * nv + j];
                          if (prow >= 0 && vc >= 0)
                            local(prow, vc) += cb * bval;
                          if (vr >= 0 && pcol >= 0)
                            local(vr, pcol) -= cb * bval;
                        }
                  }
              }
        }

      patch.lu = Eigen::PartialPivLU<Eigen::MatrixXd>(local);
      if (patch.lu.rcond() < 1e-12)
        {
          // Degenerate patch (it spans the whole domain): the local matrix
          // carries up to k+1 constant-pressure null directions.
          patch.cod = std::make_unique<
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>>(local);
          if (patch.cod->rank() + ns < n_t)
            throw std::runtime_error("VankaSmoother: singular local patch matrix");
        }

      for (int i = 0; i < n_t; ++i)
        pos[patch.dofs[i]] = -1;
    }

  // Valence weights: 1 / number of patches containing the dof.
  std::vector<int> valence(static_cast<std::size_t>(ns) * (mv + mp), 0);
  for (const auto &patch : smoother.patches_)
    for (const Eigen::Index d : patch.dofs)
      ++valence[d];
  for (auto &patch : smoother.patches_)
    {
      patch.weights.resize(patch.size());
      for (int i = 0; i < patch.size(); ++i)
        patch.weights(i) = 1.0 / valence[patch.dofs[i]];
    }
  return smoother;
}

void
VankaSmoother::apply_additive(const BlockVector &residual, BlockVector &out) const
{
  require_same_shape(residual, out, "apply_additive");
  out.setZero();
  const Eigen::VectorXd &r = residual.flat();
  Eigen::VectorXd &      y = out.flat();
  Eigen::VectorXd        loc;
  for (const auto &patch : patches_)
    {
      const int n_t = patch.size();
      loc.resize(n_t);
      for (int i = 0; i < n_t; ++i)
        loc(i) = r(patch.dofs[i]);
      loc = patch.solve(loc);
      for (int i = 0; i < n_t; ++i)
        y(patch.dofs[i]) += patch.weights(i) * loc(i);
      mult_adds_ += static_cast<std::uint64_t>(n_t) * n_t;
    }
}

void
VankaSmoother::smooth_step(const SpaceTimeBlockOperator &op,
                           const BlockVector &           b,
                           BlockVector &                 u,
                           double                        omega) const
{
  if (!(omega > 0.0 && omega <= 1.0))
    throw std::invalid_argument("smooth_step: omega must be in (0, 1]");
  BlockVector residual = op.make_vector();
  op.apply_block(u, residual);
  residual *= -1.0;
  residual += b;
  BlockVector correction = op.make_vector();
  apply_additive(residual, correction);
  correction *= omega;
  u += correction;
}

std::uint64_t
VankaSmoother::total_matrix_elements() const
{
  std::uint64_t total = 0;
  for (const auto &patch : patches_)
    total += static_cast<std::uint64_t>(patch.size()) * patch.size();
  return total;
}

std::uint64_t
VankaSmoother::nominal_block_size(int k, int r, int d)
{
  std::uint64_t vel = d, pre = 1;
  for (int i = 0; i < d; ++i)
    {
      vel *= r + 2;
      pre *= r + 1;
    }
  return static_cast<std::uint64_t>(k + 1) * (vel + pre);
}

} // namespace stmg
