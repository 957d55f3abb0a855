#pragma once

#include "stmg/basis1d.hpp"
#include "stmg/mesh.hpp"
#include "stmg/pdisc.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

namespace stmg
{

/// Velocity boundary data: (x, y, t, component) -> value.
using BoundaryValueFn = std::function<double(double, double, double, int)>;

/// Continuous vector-valued Q_{r+1} space on one mesh level. Scalar nodes
/// sit on a global tensor grid of Gauss-Lobatto points per cell; dofs of the
/// two components are stacked component-major.
class VelocitySpace
{
public:
  VelocitySpace(const Mesh &mesh, int level, int r);

  int level() const { return level_; }
  int fe_degree() const { return r_ + 1; }
  int r() const { return r_; }
  int dim() const { return 2; }
  /// Nodes per direction and cell.
  int nodes_per_dir() const { return r_ + 2; }

  int n_scalar_dofs() const { return n_scalar_; }
  int n_dofs() const { return 2 * n_scalar_; }

  const Mesh &mesh() const { return *mesh_; }
  const NodalBasis1D &basis_1d() const { return basis_; }

  /// Scalar node ids of a cell, x fastest (size nodes_per_dir()^2).
  const std::vector<int> &cell_scalar_dofs(int cell) const
  {
    return cell_dofs_[cell];
  }

  int global_dof(int component, int scalar_dof) const
  {
    return component * n_scalar_ + scalar_dof;
  }

  double node_x(int scalar_dof) const { return coord_x_[scalar_dof % grid_x_]; }
  double node_y(int scalar_dof) const { return coord_y_[scalar_dof / grid_x_]; }

  bool scalar_on_boundary(int scalar_dof) const
  {
    return boundary_scalar_[scalar_dof];
  }
  bool dof_constrained(int dof) const
  {
    return boundary_scalar_[dof % n_scalar_];
  }
  const std::vector<int> &boundary_scalar_dofs() const { return boundary_list_; }

  /// Zero all constrained entries of a velocity coefficient vector.
  void zero_constrained(Eigen::Ref<Eigen::VectorXd> v) const;

  /// Write g(x, y, t, comp) into the constrained entries, leaving interior
  /// entries untouched.
  void set_boundary_values(Eigen::Ref<Eigen::VectorXd> v,
                           const BoundaryValueFn &     g,
                           double                      t) const;

private:
  const Mesh *     mesh_;
  int              level_;
  int              r_;
  int              grid_x_, grid_y_;
  int              n_scalar_;
  NodalBasis1D     basis_;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<double>           coord_x_, coord_y_;
  std::vector<char>             boundary_scalar_;
  std::vector<int>              boundary_list_;
};

/// Discontinuous modal P_r^disc space on one mesh level; dofs are blocked
/// per cell and never shared. The mass matrix is diagonal.
class PressureSpace
{
public:
  PressureSpace(const Mesh &mesh, int level, int r);

  int level() const { return level_; }
  int r() const { return r_; }
  int dofs_per_cell() const { return basis_.size(); }
  int n_dofs() const { return n_dofs_; }

  const Mesh &mesh() const { return *mesh_; }
  const PDiscBasis &basis() const { return basis_; }

  int cell_dof(int cell, int local) const
  {
    return cell * basis_.size() + local;
  }

  /// Diagonal of the pressure mass matrix.
  const Eigen::VectorXd &mass_diagonal() const { return mass_diag_; }

  /// Coefficient vector of the constant function 1 (one entry per cell).
  const Eigen::VectorXd &one_coefficients() const { return one_coeffs_; }

  /// Mean vector m with <p, m> = integral of p over the domain.
  const Eigen::VectorXd &mean_vector() const { return mean_vec_; }

  double domain_volume() const { return volume_; }

  /// L2-orthogonal projection onto the mean-zero subspace; idempotent.
  void project_mean_zero(Eigen::Ref<Eigen::VectorXd> p) const;

  /// Integral of the represented pressure over the domain.
  double mean_integral(const Eigen::Ref<const Eigen::VectorXd> &p) const
  {
    return mean_vec_.dot(p);
  }

private:
  const Mesh *    mesh_;
  int             level_;
  int             r_;
  int             n_dofs_;
  PDiscBasis      basis_;
  Eigen::VectorXd mass_diag_;
  Eigen::VectorXd one_coeffs_;
  Eigen::VectorXd mean_vec_;
  double          volume_;
};

VelocitySpace build_velocity_space(const Mesh &mesh, int level, int r);
PressureSpace build_pressure_space(const Mesh &mesh, int level, int r);

} // namespace stmg
