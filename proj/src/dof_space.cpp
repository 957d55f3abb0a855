#include "stmg/dof_space.hpp"

#include "stmg/quadrature.hpp"

#include <stdexcept>

namespace stmg
{

VelocitySpace::VelocitySpace(const Mesh &mesh, int level, int r)
  : mesh_(&mesh)
  , level_(level)
  , r_(r)
  , basis_(gauss_lobatto_points(r + 2))
{
  if (r < 1)
    throw std::invalid_argument("VelocitySpace: r must be >= 1");
  const int nx = mesh.cells_x(level), ny = mesh.cells_y(level);
  const int p  = r + 1;
  grid_x_      = nx * p + 1;
  grid_y_      = ny * p + 1;
  n_scalar_    = grid_x_ * grid_y_;

  const int n1 = p + 1;
  cell_dofs_.resize(mesh.n_cells(level));
  for (int cell = 0; cell < mesh.n_cells(level); ++cell)
    {
      const auto [cx, cy] = mesh.cell_coords(level, cell);
      auto &dofs          = cell_dofs_[cell];
      dofs.resize(n1 * n1);
      for (int iy = 0; iy < n1; ++iy)
        for (int ix = 0; ix < n1; ++ix)
          dofs[iy * n1 + ix] = (cy * p + iy) * grid_x_ + (cx * p + ix);
    }

  // Node coordinates of the global tensor grid; shared cell boundaries get
  // identical values because the Gauss-Lobatto set contains both endpoints.
  const Box    domain = mesh.domain();
  const double dx = mesh.hx(level), dy = mesh.hy(level);
  coord_x_.resize(grid_x_);
  coord_y_.resize(grid_y_);
  const Eigen::VectorXd &nodes = basis_.nodes();
  for (int cx = 0; cx < nx; ++cx)
    for (int a = 0; a < n1; ++a)
      coord_x_[cx * p + a] = domain.x0 + dx * (cx + 0.5 * (nodes(a) + 1.0));
  for (int cy = 0; cy < ny; ++cy)
    for (int a = 0; a < n1; ++a)
      coord_y_[cy * p + a] = domain.y0 + dy * (cy + 0.5 * (nodes(a) + 1.0));
  coord_x_.back() = domain.x1;
  coord_y_.back() = domain.y1;

  boundary_scalar_.assign(n_scalar_, 0);
  for (int j = 0; j < grid_y_; ++j)
    for (int i = 0; i < grid_x_; ++i)
      if (i == 0 || i == grid_x_ - 1 || j == 0 || j == grid_y_ - 1)
        {
          boundary_scalar_[j * grid_x_ + i] = 1;
          boundary_list_.push_back(j * grid_x_ + i);
        }
}

void
VelocitySpace::zero_constrained(Eigen::Ref<Eigen::VectorXd> v) const
{
  for (int comp = 0; comp < 2; ++comp)
    for (const int s : boundary_list_)
      v(comp * n_scalar_ + s) = 0.0;
}

void
VelocitySpace::set_boundary_values(Eigen::Ref<Eigen::VectorXd> v,
                                   const BoundaryValueFn &     g,
                                   double                      t) const
{
  for (const int s : boundary_list_)
    {
      const double x = node_x(s), y = node_y(s);
      for (int comp = 0; comp < 2; ++comp)
        v(comp * n_scalar_ + s) = g(x, y, t, comp);
    }
}

PressureSpace::PressureSpace(const Mesh &mesh, int level, int r)
  : mesh_(&mesh)
  , level_(level)
  , r_(r)
  , basis_(r, 2)
{
  if (r < 1)
    throw std::invalid_argument("PressureSpace: r must be >= 1");
  const int n_cells = mesh.n_cells(level);
  const int np      = basis_.size();
  n_dofs_           = n_cells * np;

  const double jdet = 0.25 * mesh.hx(level) * mesh.hy(level);

  mass_diag_.resize(n_dofs_);
  one_coeffs_ = Eigen::VectorXd::Zero(n_dofs_);
  mean_vec_   = Eigen::VectorXd::Zero(n_dofs_);
  for (int cell = 0; cell < n_cells; ++cell)
    {
      for (int l = 0; l < np; ++l)
        mass_diag_(cell * np + l) = jdet * basis_.gram_diagonal(l);
      one_coeffs_(cell * np) = 1.0;
      mean_vec_(cell * np)   = jdet * basis_.gram_diagonal(0); // = |K|
    }
  volume_ = mesh.domain().volume();
}

void
PressureSpace::project_mean_zero(Eigen::Ref<Eigen::VectorXd> p) const
{
  if (p.size() != n_dofs_)
    throw std::invalid_argument("project_mean_zero: size mismatch");
  const double mean = mean_vec_.dot(p) / volume_;
  const int    np   = basis_.size();
  for (int cell = 0; cell < mesh_->n_cells(level_); ++cell)
    p(cell * np) -= mean;
}

VelocitySpace
build_velocity_space(const Mesh &mesh, int level, int r)
{
  return VelocitySpace(mesh, level, r);
}

PressureSpace
build_pressure_space(const Mesh &mesh, int level, int r)
{
  return PressureSpace(mesh, level, r);
}

} // namespace stmg
