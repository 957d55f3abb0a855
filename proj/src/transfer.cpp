#include "stmg/transfer.hpp"

#include "stmg/quadrature.hpp"

#include <stdexcept>
#include <vector>

namespace stmg
{

std::string
to_string(TransferKind kind)
{
  switch (kind)
    {
      case TransferKind::identity:
        return "identity";
      case TransferKind::h_space:
        return "h_space";
      case TransferKind::p_space:
        return "p_space";
      case TransferKind::p_time:
        return "p_time";
      case TransferKind::h_space_p_time:
        return "h_space+p_time";
      case TransferKind::p_space_p_time:
        return "p_space+p_time";
    }
  return "?";
}

namespace
{
  // Temporal combination Z^a = sum_b E(a,b) W^b over velocity and pressure
  // blocks; E may also be the transpose for restriction.
  BlockVector
  temporal_combine(const Eigen::MatrixXd &e, const BlockVector &w)
  {
    const int   ns_out = static_cast<int>(e.rows());
    BlockVector z(ns_out, w.n_velocity(), w.n_pressure());
    for (int a = 0; a < ns_out; ++a)
      for (int b = 0; b < w.n_slots(); ++b)
        {
          z.velocity(a).noalias() += e(a, b) * w.velocity(b);
          z.pressure(a).noalias() += e(a, b) * w.pressure(b);
        }
    return z;
  }
} // namespace

BlockVector
TransferPair::prolongate(const BlockVector &coarse) const
{
  const BlockVector *w = &coarse;
  BlockVector        spatial_out;
  if (has_spatial_)
    {
      const Eigen::Index nsc_c = vspace_coarse_->n_scalar_dofs();
      const Eigen::Index nsc_f = vspace_fine_->n_scalar_dofs();
      spatial_out = BlockVector(coarse.n_slots(), 2 * nsc_f, pspace_fine_->n_dofs());
      for (int a = 0; a < coarse.n_slots(); ++a)
        {
          for (int comp = 0; comp < 2; ++comp)
            spatial_out.velocity(a).segment(comp * nsc_f, nsc_f).noalias() =
              p_vel_ * coarse.velocity(a).segment(comp * nsc_c, nsc_c);
          spatial_out.pressure(a).noalias() = p_pre_ * coarse.pressure(a);
        }
      w = &spatial_out;
    }
  if (has_temporal_)
    return temporal_combine(e_time_, *w);
  return *w;
}

BlockVector
TransferPair::restrict_(const BlockVector &fine) const
{
  const BlockVector *w = &fine;
  BlockVector        temporal_out;
  if (has_temporal_)
    {
      temporal_out = temporal_combine(e_time_.transpose(), fine);
      w            = &temporal_out;
    }
  if (has_spatial_)
    {
      const Eigen::Index nsc_c = vspace_coarse_->n_scalar_dofs();
      const Eigen::Index nsc_f = vspace_fine_->n_scalar_dofs();
      BlockVector out(w->n_slots(), 2 * nsc_c, pspace_coarse_->n_dofs());
      for (int a = 0; a < w->n_slots(); ++a)
        {
          for (int comp = 0; comp < 2; ++comp)
            out.velocity(a).segment(comp * nsc_c, nsc_c).noalias() =
              p_vel_.transpose() * w->velocity(a).segment(comp * nsc_f, nsc_f);
          out.pressure(a).noalias() = p_pre_.transpose() * w->pressure(a);
        }
      return out;
    }
  return *w;
}

BlockVector
TransferPair::prolongate_correction(const BlockVector &coarse,
                                    bool               project_pressure) const
{
  BlockVector out = prolongate(coarse);
  if (kind_ == TransferKind::identity)
    return out;
  for (int a = 0; a < out.n_slots(); ++a)
    {
      vspace_fine_->zero_constrained(out.velocity(a));
      if (project_pressure)
        pspace_fine_->project_mean_zero(out.pressure(a));
    }
  return out;
}

BlockVector
TransferPair::restrict_residual(const BlockVector &fine,
                                bool               project_pressure) const
{
  BlockVector out = restrict_(fine);
  if (kind_ == TransferKind::identity)
    return out;
  for (int a = 0; a < out.n_slots(); ++a)
    {
      vspace_coarse_->zero_constrained(out.velocity(a));
      if (project_pressure)
        pspace_coarse_->project_mean_zero(out.pressure(a));
    }
  return out;
}

TransferPair
TransferPair::identity(const VelocitySpace &vspace, const PressureSpace &pspace, int k)
{
  TransferPair t;
  t.kind_          = TransferKind::identity;
  t.k_coarse_      = k;
  t.k_fine_        = k;
  t.vspace_coarse_ = &vspace;
  t.vspace_fine_   = &vspace;
  t.pspace_coarse_ = &pspace;
  t.pspace_fine_   = &pspace;
  return t;
}

TransferPair
build_h_space_transfer(const VelocitySpace &vspace_coarse,
                       const PressureSpace &pspace_coarse,
                       const VelocitySpace &vspace_fine,
                       const PressureSpace &pspace_fine,
                       int                  k)
{
  if (vspace_fine.level() != vspace_coarse.level() + 1)
    throw std::invalid_argument("build_h_space_transfer: levels not nested");
  if (vspace_fine.r() != vspace_coarse.r())
    throw std::invalid_argument("build_h_space_transfer: degree mismatch");

  const Mesh &mesh    = vspace_coarse.mesh();
  const int   coarse  = vspace_coarse.level();
  const int   n1      = vspace_coarse.nodes_per_dir();
  const auto &basis   = vspace_coarse.basis_1d();
  const auto &nodes   = basis.nodes();

  // 1D interpolation of the coarse basis at the fine nodes of each child
  // half-interval: the fine node xi maps to (xi + 2c - 1)/2 on the parent.
  std::array<Eigen::MatrixXd, 2> e1d;
  for (int c = 0; c < 2; ++c)
    {
      e1d[c].resize(n1, n1);
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
          e1d[c](i, j) = basis.value(j, 0.5 * (nodes(i) + 2.0 * c - 1.0));
    }

  TransferPair t;
  t.kind_          = TransferKind::h_space;
  t.has_spatial_   = true;
  t.k_coarse_      = k;
  t.k_fine_        = k;
  t.vspace_coarse_ = &vspace_coarse;
  t.vspace_fine_   = &vspace_fine;
  t.pspace_coarse_ = &pspace_coarse;
  t.pspace_fine_   = &pspace_fine;

  // Velocity: nodal interpolation; every fine row is written exactly once
  // (shared nodes receive identical values from adjacent children).
  {
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<char> row_done(vspace_fine.n_scalar_dofs(), 0);
    for (int cell = 0; cell < mesh.n_cells(coarse); ++cell)
      {
        const auto &cdofs    = vspace_coarse.cell_scalar_dofs(cell);
        const auto  children = mesh.children(coarse, cell);
        for (int cy = 0; cy < 2; ++cy)
          for (int cx = 0; cx < 2; ++cx)
            {
              const auto &fdofs =
                vspace_fine.cell_scalar_dofs(children[cy * 2 + cx]);
              for (int iy = 0; iy < n1; ++iy)
                for (int ix = 0; ix < n1; ++ix)
                  {
                    const int row = fdofs[iy * n1 + ix];
                    if (row_done[row])
                      continue;
                    row_done[row] = 1;
                    for (int jy = 0; jy < n1; ++jy)
                      for (int jx = 0; jx < n1; ++jx)
                        {
                          const double v = e1d[cx](ix, jx) * e1d[cy](iy, jy);
                          if (v != 0.0)
                            trips.emplace_back(row, cdofs[jy * n1 + jx], v);
                        }
                  }
            }
      }
    t.p_vel_.resize(vspace_fine.n_scalar_dofs(), vspace_coarse.n_scalar_dofs());
    t.p_vel_.setFromTriplets(trips.begin(), trips.end());
    t.p_vel_.makeCompressed();
  }

  // Pressure: exact modal re-expansion of the parent polynomial on each
  // child, L2 projection in the orthogonal basis (exact for nested spaces).
  {
    const PDiscBasis &pb = pspace_coarse.basis();
    const int         np = pb.size();
    const int         r  = pspace_coarse.r();
    const QuadratureRule gauss = gauss_rule(r + 1);
    std::array<std::array<Eigen::MatrixXd, 2>, 2> tchild;
    Eigen::VectorXd xi_child(2), xi_parent(2);
    for (int cy = 0; cy < 2; ++cy)
      for (int cx = 0; cx < 2; ++cx)
        {
          Eigen::MatrixXd block = Eigen::MatrixXd::Zero(np, np);
          for (int qy = 0; qy < gauss.size(); ++qy)
            for (int qx = 0; qx < gauss.size(); ++qx)
              {
                const double w = gauss.weights(qx) * gauss.weights(qy);
                xi_child << gauss.points(qx), gauss.points(qy);
                xi_parent << 0.5 * (xi_child(0) + 2.0 * cx - 1.0),
                  0.5 * (xi_child(1) + 2.0 * cy - 1.0);
                for (int m = 0; m < np; ++m)
                  {
                    const double vm = pb.value(m, xi_child);
                    for (int l = 0; l < np; ++l)
                      block(m, l) += w * vm * pb.value(l, xi_parent);
                  }
              }
          for (int m = 0; m < np; ++m)
            block.row(m) /= pb.gram_diagonal(m);
          tchild[cy][cx] = block;
        }

    std::vector<Eigen::Triplet<double>> trips;
    for (int cell = 0; cell < mesh.n_cells(coarse); ++cell)
      {
        const auto children = mesh.children(coarse, cell);
        for (int cy = 0; cy < 2; ++cy)
          for (int cx = 0; cx < 2; ++cx)
            {
              const int fbase = pspace_fine.cell_dof(children[cy * 2 + cx], 0);
              const int cbase = pspace_coarse.cell_dof(cell, 0);
              const Eigen::MatrixXd &block = tchild[cy][cx];
              for (int m = 0; m < np; ++m)
                for (int l = 0; l < np; ++l)
                  if (block(m, l) != 0.0)
                    trips.emplace_back(fbase + m, cbase + l, block(m, l));
            }
      }
    t.p_pre_.resize(pspace_fine.n_dofs(), pspace_coarse.n_dofs());
    t.p_pre_.setFromTriplets(trips.begin(), trips.end());
    t.p_pre_.makeCompressed();
  }
  return t;
}

TransferPair
build_p_space_transfer(const VelocitySpace &vspace_coarse,
                       const PressureSpace &pspace_coarse,
                       const VelocitySpace &vspace_fine,
                       const PressureSpace &pspace_fine,
                       int                  k)
{
  if (vspace_fine.level() != vspace_coarse.level())
    throw std::invalid_argument("build_p_space_transfer: mesh level mismatch");
  if (vspace_coarse.r() != vspace_fine.r() / 2)
    throw std::invalid_argument("build_p_space_transfer: degrees not related by bisection");

  const Mesh &mesh  = vspace_coarse.mesh();
  const int   level = vspace_coarse.level();
  const int   n1c   = vspace_coarse.nodes_per_dir();
  const int   n1f   = vspace_fine.nodes_per_dir();

  Eigen::MatrixXd e1d(n1f, n1c);
  for (int i = 0; i < n1f; ++i)
    for (int j = 0; j < n1c; ++j)
      e1d(i, j) = vspace_coarse.basis_1d().value(j, vspace_fine.basis_1d().nodes()(i));

  TransferPair t;
  t.kind_          = TransferKind::p_space;
  t.has_spatial_   = true;
  t.k_coarse_      = k;
  t.k_fine_        = k;
  t.vspace_coarse_ = &vspace_coarse;
  t.vspace_fine_   = &vspace_fine;
  t.pspace_coarse_ = &pspace_coarse;
  t.pspace_fine_   = &pspace_fine;

  {
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<char> row_done(vspace_fine.n_scalar_dofs(), 0);
    for (int cell = 0; cell < mesh.n_cells(level); ++cell)
      {
        const auto &cdofs = vspace_coarse.cell_scalar_dofs(cell);
        const auto &fdofs = vspace_fine.cell_scalar_dofs(cell);
        for (int iy = 0; iy < n1f; ++iy)
          for (int ix = 0; ix < n1f; ++ix)
            {
              const int row = fdofs[iy * n1f + ix];
              if (row_done[row])
                continue;
              row_done[row] = 1;
              for (int jy = 0; jy < n1c; ++jy)
                for (int jx = 0; jx < n1c; ++jx)
                  {
                    const double v = e1d(ix, jx) * e1d(iy, jy);
                    if (v != 0.0)
                      trips.emplace_back(row, cdofs[jy * n1c + jx], v);
                  }
            }
      }
    t.p_vel_.resize(vspace_fine.n_scalar_dofs(), vspace_coarse.n_scalar_dofs());
    t.p_vel_.setFromTriplets(trips.begin(), trips.end());
    t.p_vel_.makeCompressed();
  }

  // Pressure: the low-degree modal coefficients embed unchanged (same
  // Legendre functions, hierarchical by total degree).
  {
    const PDiscBasis &cb = pspace_coarse.basis();
    const PDiscBasis &fb = pspace_fine.basis();
    std::vector<int>  target(cb.size(), -1);
    for (int l = 0; l < cb.size(); ++l)
      for (int m = 0; m < fb.size(); ++m)
        if (fb.exponents(m) == cb.exponents(l))
          {
            target[l] = m;
            break;
          }
    std::vector<Eigen::Triplet<double>> trips;
    for (int cell = 0; cell < mesh.n_cells(level); ++cell)
      for (int l = 0; l < cb.size(); ++l)
        trips.emplace_back(pspace_fine.cell_dof(cell, target[l]),
                           pspace_coarse.cell_dof(cell, l), 1.0);
    t.p_pre_.resize(pspace_fine.n_dofs(), pspace_coarse.n_dofs());
    t.p_pre_.setFromTriplets(trips.begin(), trips.end());
    t.p_pre_.makeCompressed();
  }
  return t;
}

TransferPair
build_p_time_transfer(int                  k_coarse,
                      int                  k_fine,
                      const VelocitySpace &vspace,
                      const PressureSpace &pspace)
{
  TransferPair t;
  t.kind_          = TransferKind::p_time;
  t.has_temporal_  = true;
  t.k_coarse_      = k_coarse;
  t.k_fine_        = k_fine;
  t.vspace_coarse_ = &vspace;
  t.vspace_fine_   = &vspace;
  t.pspace_coarse_ = &pspace;
  t.pspace_fine_   = &pspace;

  const NodalBasis1D coarse_basis(gauss_radau_right(k_coarse + 1).points);
  const Eigen::VectorXd fine_nodes = gauss_radau_right(k_fine + 1).points;
  t.e_time_.resize(k_fine + 1, k_coarse + 1);
  for (int a = 0; a <= k_fine; ++a)
    for (int b = 0; b <= k_coarse; ++b)
      t.e_time_(a, b) = coarse_basis.value(b, fine_nodes(a));
  return t;
}

TransferPair
combine_space_time_transfer(TransferPair spatial, TransferPair temporal)
{
  if (!spatial.has_spatial_ || spatial.has_temporal_ || !temporal.has_temporal_)
    throw std::invalid_argument("combine_space_time_transfer: wrong parts");
  TransferPair t  = spatial;
  t.has_temporal_ = true;
  t.e_time_       = temporal.e_time_;
  t.k_coarse_     = temporal.k_coarse_;
  t.k_fine_       = temporal.k_fine_;
  t.kind_         = spatial.kind_ == TransferKind::h_space ?
                      TransferKind::h_space_p_time :
                      TransferKind::p_space_p_time;
  return t;
}

} // namespace stmg
