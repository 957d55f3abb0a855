#include "stmg/st_operator.hpp"

#include "stmg/quadrature.hpp"

#include <stdexcept>
#include <vector>

namespace stmg
{

CellKernels::CellKernels(const VelocitySpace &vspace,
                         const PressureSpace &pspace,
                         int                  n_q_1d)
  : n1_(vspace.nodes_per_dir())
  , nq_(n_q_1d)
  , np_(pspace.dofs_per_cell())
{
  const Mesh &mesh = vspace.mesh();
  hx_              = mesh.hx(vspace.level());
  hy_              = mesh.hy(vspace.level());
  jdet_            = 0.25 * hx_ * hy_;

  const QuadratureRule gauss = gauss_rule(nq_);
  qp_                        = gauss.points;
  qw_                        = gauss.weights;
  phi_                       = vspace.basis_1d().value_table(qp_);
  dphi_                      = vspace.basis_1d().derivative_table(qp_);

  psi_.resize(nq_ * nq_, np_);
  Eigen::VectorXd xi(2);
  for (int qy = 0; qy < nq_; ++qy)
    for (int qx = 0; qx < nq_; ++qx)
      {
        xi << qp_(qx), qp_(qy);
        for (int l = 0; l < np_; ++l)
          psi_(qy * nq_ + qx, l) = pspace.basis().value(l, xi);
      }

  w2d_.resize(nq_, nq_);
  for (int qy = 0; qy < nq_; ++qy)
    for (int qx = 0; qx < nq_; ++qx)
      w2d_(qx, qy) = qw_(qx) * qw_(qy) * jdet_;
}

void
CellKernels::mass_local(const LocalScalar &u, LocalScalar &out) const
{
  const Eigen::MatrixXd vq =
    (phi_ * u * phi_.transpose()).cwiseProduct(w2d_);
  out.noalias() += phi_.transpose() * vq * phi_;
}

void
CellKernels::laplace_local(const LocalScalar &u, LocalScalar &out) const
{
  const double    cx = dxi_dx(), cy = deta_dy();
  Eigen::MatrixXd gx = (cx * (dphi_ * u * phi_.transpose())).cwiseProduct(w2d_);
  Eigen::MatrixXd gy = (cy * (phi_ * u * dphi_.transpose())).cwiseProduct(w2d_);
  out.noalias() += cx * (dphi_.transpose() * gx * phi_);
  out.noalias() += cy * (phi_.transpose() * gy * dphi_);
}

void
CellKernels::div_local(const LocalScalar &ux,
                       const LocalScalar &uy,
                       Eigen::VectorXd &  p_out) const
{
  Eigen::MatrixXd dq = dxi_dx() * (dphi_ * ux * phi_.transpose());
  dq.noalias() += deta_dy() * (phi_ * uy * dphi_.transpose());
  dq = dq.cwiseProduct(w2d_);
  p_out.noalias() +=
    psi_.transpose() * Eigen::Map<const Eigen::VectorXd>(dq.data(), nq_ * nq_);
}

void
CellKernels::div_transpose_local(const Eigen::VectorXd &p,
                                 LocalScalar &          ux_out,
                                 LocalScalar &          uy_out) const
{
  const Eigen::VectorXd pq_flat = psi_ * p;
  const Eigen::MatrixXd pq =
    Eigen::Map<const Eigen::MatrixXd>(pq_flat.data(), nq_, nq_).cwiseProduct(w2d_);
  ux_out.noalias() += dxi_dx() * (dphi_.transpose() * pq * phi_);
  uy_out.noalias() += deta_dy() * (phi_.transpose() * pq * dphi_);
}

void
CellKernels::grad_div_local(const LocalScalar &ux,
                            const LocalScalar &uy,
                            LocalScalar &      ux_out,
                            LocalScalar &      uy_out) const
{
  Eigen::MatrixXd dq = dxi_dx() * (dphi_ * ux * phi_.transpose());
  dq.noalias() += deta_dy() * (phi_ * uy * dphi_.transpose());
  dq = dq.cwiseProduct(w2d_);
  ux_out.noalias() += dxi_dx() * (dphi_.transpose() * dq * phi_);
  uy_out.noalias() += deta_dy() * (phi_.transpose() * dq * dphi_);
}

ElementMatrices
extract_element_matrices(const CellKernels &kernels)
{
  const int n1 = kernels.n_nodes_1d();
  const int nv = n1 * n1;
  const int np = kernels.n_pressure();

  ElementMatrices elem;
  elem.mass     = Eigen::MatrixXd::Zero(nv, nv);
  elem.laplace  = Eigen::MatrixXd::Zero(nv, nv);
  elem.div      = Eigen::MatrixXd::Zero(np, 2 * nv);
  elem.grad_div = Eigen::MatrixXd::Zero(2 * nv, 2 * nv);

  Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(n1, n1);
  Eigen::MatrixXd out(n1, n1), out2(n1, n1);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n1, n1);
  for (int j = 0; j < nv; ++j)
    {
      unit.data()[j] = 1.0;

      out.setZero();
      kernels.mass_local(unit, out);
      elem.mass.col(j) = Eigen::Map<const Eigen::VectorXd>(out.data(), nv);

      out.setZero();
      kernels.laplace_local(unit, out);
      elem.laplace.col(j) = Eigen::Map<const Eigen::VectorXd>(out.data(), nv);

      Eigen::VectorXd px = Eigen::VectorXd::Zero(np);
      kernels.div_local(unit, zero, px);
      elem.div.col(j) = px;

      Eigen::VectorXd py = Eigen::VectorXd::Zero(np);
      kernels.div_local(zero, unit, py);
      elem.div.col(nv + j) = py;

      out.setZero();
      out2.setZero();
      kernels.grad_div_local(unit, zero, out, out2);
      elem.grad_div.col(j).head(nv) =
        Eigen::Map<const Eigen::VectorXd>(out.data(), nv);
      elem.grad_div.col(j).tail(nv) =
        Eigen::Map<const Eigen::VectorXd>(out2.data(), nv);

      out.setZero();
      out2.setZero();
      kernels.grad_div_local(zero, unit, out, out2);
      elem.grad_div.col(nv + j).head(nv) =
        Eigen::Map<const Eigen::VectorXd>(out.data(), nv);
      elem.grad_div.col(nv + j).tail(nv) =
        Eigen::Map<const Eigen::VectorXd>(out2.data(), nv);

      unit.data()[j] = 0.0;
    }
  return elem;
}

SpaceTimeBlockOperator::SpaceTimeBlockOperator(const VelocitySpace &   vspace,
                                               const PressureSpace &   pspace,
                                               const TemporalMatrices &tmat,
                                               double                  nu,
                                               double                  grad_div)
  : vspace_(&vspace)
  , pspace_(&pspace)
  , tmat_(&tmat)
  , nu_(nu)
  , grad_div_(grad_div)
  , kernels_(vspace, pspace, vspace.r() + 2)
  , elem_(extract_element_matrices(kernels_))
{}

namespace
{
  // Gather/scatter between a global scalar component vector and the local
  // (n1 x n1) cell matrix; the local linear index equals iy*n1+ix in both.
  void
  gather(const Eigen::Ref<const Eigen::VectorXd> &v,
         const std::vector<int> &                 dofs,
         Eigen::Index                             base,
         Eigen::MatrixXd &                        u)
  {
    double *d = u.data();
    for (std::size_t loc = 0; loc < dofs.size(); ++loc)
      d[loc] = v(base + dofs[loc]);
  }

  void
  scatter_add(const Eigen::MatrixXd & u,
              const std::vector<int> &dofs,
              Eigen::Index            base,
              Eigen::Ref<Eigen::VectorXd> v)
  {
    const double *d = u.data();
    for (std::size_t loc = 0; loc < dofs.size(); ++loc)
      v(base + dofs[loc]) += d[loc];
  }
} // namespace

void
SpaceTimeBlockOperator::apply_velocity_mass(
  const Eigen::Ref<const Eigen::VectorXd> &v,
  Eigen::Ref<Eigen::VectorXd>              y) const
{
  if (v.size() != vspace_->n_dofs() || y.size() != vspace_->n_dofs())
    throw std::invalid_argument("apply_velocity_mass: size mismatch");
  y.setZero();
  const int       n1 = kernels_.n_nodes_1d();
  Eigen::MatrixXd u(n1, n1), out(n1, n1);
  for (int comp = 0; comp < 2; ++comp)
    {
      const Eigen::Index base = vspace_->global_dof(comp, 0);
      for (int cell = 0; cell < vspace_->mesh().n_cells(vspace_->level()); ++cell)
        {
          const auto &dofs = vspace_->cell_scalar_dofs(cell);
          gather(v, dofs, base, u);
          out.setZero();
          kernels_.mass_local(u, out);
          scatter_add(out, dofs, base, y);
        }
    }
}

void
SpaceTimeBlockOperator::apply_laplace(const Eigen::Ref<const Eigen::VectorXd> &v,
                                      Eigen::Ref<Eigen::VectorXd> y) const
{
  if (v.size() != vspace_->n_dofs() || y.size() != vspace_->n_dofs())
    throw std::invalid_argument("apply_laplace: size mismatch");
  y.setZero();
  const int       n1 = kernels_.n_nodes_1d();
  Eigen::MatrixXd u(n1, n1), out(n1, n1);
  for (int comp = 0; comp < 2; ++comp)
    {
      const Eigen::Index base = vspace_->global_dof(comp, 0);
      for (int cell = 0; cell < vspace_->mesh().n_cells(vspace_->level()); ++cell)
        {
          const auto &dofs = vspace_->cell_scalar_dofs(cell);
          gather(v, dofs, base, u);
          out.setZero();
          kernels_.laplace_local(u, out);
          scatter_add(out, dofs, base, y);
        }
    }
}

void
SpaceTimeBlockOperator::apply_div(const Eigen::Ref<const Eigen::VectorXd> &v,
                                  Eigen::Ref<Eigen::VectorXd> p) const
{
  if (v.size() != vspace_->n_dofs() || p.size() != pspace_->n_dofs())
    throw std::invalid_argument("apply_div: size mismatch");
  p.setZero();
  const int       n1 = kernels_.n_nodes_1d();
  const int       np = pspace_->dofs_per_cell();
  Eigen::MatrixXd ux(n1, n1), uy(n1, n1);
  Eigen::VectorXd ploc(np);
  for (int cell = 0; cell < vspace_->mesh().n_cells(vspace_->level()); ++cell)
    {
      const auto &dofs = vspace_->cell_scalar_dofs(cell);
      gather(v, dofs, vspace_->global_dof(0, 0), ux);
      gather(v, dofs, vspace_->global_dof(1, 0), uy);
      ploc.setZero();
      kernels_.div_local(ux, uy, ploc);
      p.segment(pspace_->cell_dof(cell, 0), np) += ploc;
    }
}

void
SpaceTimeBlockOperator::apply_div_transpose(
  const Eigen::Ref<const Eigen::VectorXd> &p,
  Eigen::Ref<Eigen::VectorXd>              v) const
{
  if (v.size() != vspace_->n_dofs() || p.size() != pspace_->n_dofs())
    throw std::invalid_argument("apply_div_transpose: size mismatch");
  v.setZero();
  const int       n1 = kernels_.n_nodes_1d();
  const int       np = pspace_->dofs_per_cell();
  Eigen::MatrixXd ux(n1, n1), uy(n1, n1);
  for (int cell = 0; cell < vspace_->mesh().n_cells(vspace_->level()); ++cell)
    {
      const auto &dofs = vspace_->cell_scalar_dofs(cell);
      ux.setZero();
      uy.setZero();
      kernels_.div_transpose_local(p.segment(pspace_->cell_dof(cell, 0), np), ux, uy);
      scatter_add(ux, dofs, vspace_->global_dof(0, 0), v);
      scatter_add(uy, dofs, vspace_->global_dof(1, 0), v);
    }
}

void
SpaceTimeBlockOperator::apply_pressure_mass(
  const Eigen::Ref<const Eigen::VectorXd> &p,
  Eigen::Ref<Eigen::VectorXd>              y) const
{
  if (p.size() != pspace_->n_dofs() || y.size() != pspace_->n_dofs())
    throw std::invalid_argument("apply_pressure_mass: size mismatch");
  y = pspace_->mass_diagonal().cwiseProduct(p);
}

void
SpaceTimeBlockOperator::apply_grad_div(const Eigen::Ref<const Eigen::VectorXd> &v,
                                       Eigen::Ref<Eigen::VectorXd> y) const
{
  if (v.size() != vspace_->n_dofs() || y.size() != vspace_->n_dofs())
    throw std::invalid_argument("apply_grad_div: size mismatch");
  y.setZero();
  const int       n1 = kernels_.n_nodes_1d();
  Eigen::MatrixXd ux(n1, n1), uy(n1, n1), ox(n1, n1), oy(n1, n1);
  for (int cell = 0; cell < vspace_->mesh().n_cells(vspace_->level()); ++cell)
    {
      const auto &dofs = vspace_->cell_scalar_dofs(cell);
      gather(v, dofs, vspace_->global_dof(0, 0), ux);
      gather(v, dofs, vspace_->global_dof(1, 0), uy);
      ox.setZero();
      oy.setZero();
      kernels_.grad_div_local(ux, uy, ox, oy);
      scatter_add(ox, dofs, vspace_->global_dof(0, 0), y);
      scatter_add(oy, dofs, vspace_->global_dof(1, 0), y);
    }
}

void
SpaceTimeBlockOperator::apply_block_impl(const BlockVector &x,
                                         BlockVector &      y,
                                         bool               constrain) const
{
  require_same_shape(x, y, "apply_block");
  const int          ns = n_slots();
  const Eigen::Index mv = vspace_->n_dofs();
  const Eigen::Index mp = pspace_->n_dofs();
  if (x.n_slots() != ns || x.n_velocity() != mv || x.n_pressure() != mp)
    throw std::invalid_argument("apply_block: operand shape mismatch");

  const BlockVector *xin = &x;
  BlockVector        xc;
  if (constrain)
    {
      xc = x;
      for (int a = 0; a < ns; ++a)
        vspace_->zero_constrained(xc.velocity(a));
      xin = &xc;
    }

  // Spatial operators once per temporal dof, then the temporal combination
  // blockwise.
  std::vector<Eigen::VectorXd> mv_slot(ns), av_slot(ns), bv_slot(ns), btp_slot(ns);
  std::vector<Eigen::VectorXd> gv_slot(grad_div_ != 0.0 ? ns : 0);
  for (int a = 0; a < ns; ++a)
    {
      mv_slot[a].resize(mv);
      av_slot[a].resize(mv);
      bv_slot[a].resize(mp);
      btp_slot[a].resize(mv);
      apply_velocity_mass(xin->velocity(a), mv_slot[a]);
      apply_laplace(xin->velocity(a), av_slot[a]);
      apply_div(xin->velocity(a), bv_slot[a]);
      apply_div_transpose(xin->pressure(a), btp_slot[a]);
      if (grad_div_ != 0.0)
        {
          gv_slot[a].resize(mv);
          apply_grad_div(xin->velocity(a), gv_slot[a]);
        }
    }

  const Eigen::MatrixXd &kt = tmat_->dt_plus_jump;
  const Eigen::MatrixXd &mt = tmat_->mass;
  for (int a = 0; a < ns; ++a)
    {
      auto yv = y.velocity(a);
      auto yp = y.pressure(a);
      yv.setZero();
      yp.setZero();
      for (int b = 0; b < ns; ++b)
        {
          yv.noalias() += kt(a, b) * mv_slot[b];
          yv.noalias() += (nu_ * mt(a, b)) * av_slot[b];
          if (grad_div_ != 0.0)
            yv.noalias() += (grad_div_ * mt(a, b)) * gv_slot[b];
          yv.noalias() -= mt(a, b) * btp_slot[b];
          yp.noalias() += mt(a, b) * bv_slot[b];
        }
    }

  if (constrain)
    for (int a = 0; a < ns; ++a)
      {
        auto       yv = y.velocity(a);
        const auto xv = x.velocity(a);
        for (int comp = 0; comp < 2; ++comp)
          for (const int s : vspace_->boundary_scalar_dofs())
            {
              const Eigen::Index g = vspace_->global_dof(comp, s);
              yv(g)                = xv(g);
            }
      }
}

void
SpaceTimeBlockOperator::apply_block(const BlockVector &x, BlockVector &y) const
{
  apply_block_impl(x, y, true);
}

void
SpaceTimeBlockOperator::apply_block_raw(const BlockVector &x, BlockVector &y) const
{
  apply_block_impl(x, y, false);
}

BlockVector
SpaceTimeBlockOperator::coupling_rhs(
  const Eigen::Ref<const Eigen::VectorXd> &v_prev) const
{
  if (v_prev.size() != vspace_->n_dofs())
    throw std::invalid_argument("coupling_rhs: size mismatch");
  BlockVector     out = make_vector();
  Eigen::VectorXd mw(vspace_->n_dofs());
  apply_velocity_mass(v_prev, mw);
  for (int a = 0; a < n_slots(); ++a)
    out.velocity(a) = tmat_->left_values(a) * mw;
  return out;
}

BlockVector
SpaceTimeBlockOperator::assemble_rhs(const ForceFn &f, double t_start) const
{
  BlockVector out = make_vector();

  const int       ns = n_slots();
  const int       n1 = kernels_.n_nodes_1d();
  const int       nq = kernels_.n_q_1d();
  const double    tau = tmat_->tau;
  const Mesh &    mesh = vspace_->mesh();
  const int       level = vspace_->level();
  Eigen::MatrixXd fq(nq, nq), loc(n1, n1);

  for (int a = 0; a < ns; ++a)
    {
      const double t_a = t_start + 0.5 * tau * (tmat_->nodes(a) + 1.0);
      // Radau-in-time with a nodal basis: only the a-th point contributes.
      const double wt = 0.5 * tau * tmat_->weights(a);
      auto         yv = out.velocity(a);
      for (int cell = 0; cell < mesh.n_cells(level); ++cell)
        {
          const Box   box  = mesh.cell_box(level, cell);
          const auto &dofs = vspace_->cell_scalar_dofs(cell);
          for (int comp = 0; comp < 2; ++comp)
            {
              for (int qy = 0; qy < nq; ++qy)
                for (int qx = 0; qx < nq; ++qx)
                  {
                    const double x =
                      box.x0 + 0.5 * box.width() * (kernels_.qpoints()(qx) + 1.0);
                    const double y =
                      box.y0 + 0.5 * box.height() * (kernels_.qpoints()(qy) + 1.0);
                    fq(qx, qy) = f(x, y, t_a, comp) *
                                 kernels_.qweights()(qx) * kernels_.qweights()(qy) *
                                 kernels_.jdet() * wt;
                  }
              loc.noalias() =
                kernels_.phi().transpose() * fq * kernels_.phi();
              scatter_add(loc, dofs, vspace_->global_dof(comp, 0), yv);
            }
        }
      vspace_->zero_constrained(yv);
    }
  return out;
}

Eigen::SparseMatrix<double>
SpaceTimeBlockOperator::assemble_sparse_oracle() const
{
  const int          ns = n_slots();
  const Eigen::Index mv = vspace_->n_dofs();
  const Eigen::Index mp = pspace_->n_dofs();
  const Eigen::Index total = ns * (mv + mp);
  if (total > 200000)
    throw std::runtime_error("assemble_sparse_oracle: problem too large for assembly");

  const int nsc = vspace_->n_scalar_dofs();
  const int n1  = kernels_.n_nodes_1d();
  const int nv  = n1 * n1;
  const int np  = pspace_->dofs_per_cell();

  const Eigen::MatrixXd &kt = tmat_->dt_plus_jump;
  const Eigen::MatrixXd &mt = tmat_->mass;

  const auto voff = [&](int a) { return static_cast<Eigen::Index>(a) * mv; };
  const auto poff = [&](int a) { return ns * mv + static_cast<Eigen::Index>(a) * mp; };

  std::vector<Eigen::Triplet<double>> trips;
  const Mesh &mesh  = vspace_->mesh();
  const int   level = vspace_->level();
  for (int cell = 0; cell < mesh.n_cells(level); ++cell)
    {
      const auto &dofs  = vspace_->cell_scalar_dofs(cell);
      const int   pbase = pspace_->cell_dof(cell, 0);
      for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b)
          {
            // velocity-velocity, including the component-coupling grad-div
            for (int ci = 0; ci < 2; ++ci)
              for (int i = 0; i < nv; ++i)
                {
                  if (vspace_->scalar_on_boundary(dofs[i]))
                    continue;
                  const Eigen::Index row = voff(a) + ci * nsc + dofs[i];
                  for (int cj = 0; cj < 2; ++cj)
                    for (int j = 0; j < nv; ++j)
                      {
                        if (vspace_->scalar_on_boundary(dofs[j]))
                          continue;
                        double val = grad_div_ * mt(a, b) *
                                     elem_.grad_div(ci * nv + i, cj * nv + j);
                        if (ci == cj)
                          val += kt(a, b) * elem_.mass(i, j) +
                                 nu_ * mt(a, b) * elem_.laplace(i, j);
                        if (val != 0.0)
                          trips.emplace_back(row, voff(b) + cj * nsc + dofs[j],
                                             val);
                      }
                }
            // velocity-pressure and pressure-velocity
            for (int l = 0; l < np; ++l)
              {
                const Eigen::Index prow = poff(a) + pbase + l;
                const Eigen::Index pcol = poff(b) + pbase + l;
                for (int comp = 0; comp < 2; ++comp)
                  for (int j = 0; j < nv; ++j)
                    {
                      if (vspace_->scalar_on_boundary(dofs[j]))
                        continue;
                      const double bval = elem_.div(l, comp * nv + j);
                      trips.emplace_back(voff(a) + comp * nsc + dofs[j], pcol,
                                         -mt(a, b) * bval);
                      trips.emplace_back(prow, voff(b) + comp * nsc + dofs[j],
                                         mt(a, b) * bval);
                    }
              }
          }
    }
  // Identity on constrained velocity dofs.
  for (int a = 0; a < ns; ++a)
    for (int comp = 0; comp < 2; ++comp)
      for (const int s : vspace_->boundary_scalar_dofs())
        {
          const Eigen::Index g = voff(a) + comp * nsc + s;
          trips.emplace_back(g, g, 1.0);
        }

  Eigen::SparseMatrix<double> mat(total, total);
  mat.setFromTriplets(trips.begin(), trips.end());
  mat.makeCompressed();
  return mat;
}

} // namespace stmg
