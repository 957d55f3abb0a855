#pragma once

#include "stmg/block_vector.hpp"
#include "stmg/dof_space.hpp"
#include "stmg/time_basis.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>

namespace stmg
{

/// Spatial volume force: (x, y, t, component) -> value.
using ForceFn = std::function<double(double, double, double, int)>;

/// Quadrature-point tables for the sum-factorized cell kernels of one
/// (mesh level, velocity degree, pressure degree) combination. The cells of
/// a level are congruent, so a single set of tables serves all of them.
class CellKernels
{
public:
  CellKernels(const VelocitySpace &vspace,
              const PressureSpace &pspace,
              int                  n_q_1d);

  int n_nodes_1d() const { return n1_; }
  int n_q_1d() const { return nq_; }
  int n_pressure() const { return np_; }
  double jdet() const { return jdet_; }

  // Local scalar velocity dofs are (n1 x n1) matrices with x the row index.
  using LocalScalar = Eigen::MatrixXd;

  /// out += M_loc * u (scalar mass on one cell).
  void mass_local(const LocalScalar &u, LocalScalar &out) const;
  /// out += A_loc * u (scalar stiffness on one cell).
  void laplace_local(const LocalScalar &u, LocalScalar &out) const;
  /// p_out += B_loc (ux, uy): pressure-tested divergence.
  void div_local(const LocalScalar &ux,
                 const LocalScalar &uy,
                 Eigen::VectorXd &  p_out) const;
  /// (ux_out, uy_out) += B_loc^T p.
  void div_transpose_local(const Eigen::VectorXd &p,
                           LocalScalar &          ux_out,
                           LocalScalar &          uy_out) const;
  /// (ux_out, uy_out) += G_loc (ux, uy): the grad-div pairing
  /// <div v, div w> on one cell; couples the velocity components.
  void grad_div_local(const LocalScalar &ux,
                      const LocalScalar &uy,
                      LocalScalar &      ux_out,
                      LocalScalar &      uy_out) const;

  /// Values of the velocity field and quadrature scaling used by the
  /// right-hand side and error evaluation paths.
  const Eigen::MatrixXd &phi() const { return phi_; }
  const Eigen::MatrixXd &dphi() const { return dphi_; }
  const Eigen::VectorXd &qpoints() const { return qp_; }
  const Eigen::VectorXd &qweights() const { return qw_; }
  const Eigen::MatrixXd &psi() const { return psi_; }
  double dxi_dx() const { return 2.0 / hx_; }
  double deta_dy() const { return 2.0 / hy_; }

private:
  int    n1_, nq_, np_;
  double hx_, hy_, jdet_;
  Eigen::MatrixXd phi_, dphi_; // nq x n1
  Eigen::VectorXd qp_, qw_;    // 1D Gauss points/weights
  Eigen::MatrixXd psi_;        // (nq*nq) x np pressure values, q = qy*nq+qx
  Eigen::MatrixXd w2d_;        // nq x nq combined weights * jdet
};

/// Dense element matrices of one (congruent) cell, extracted by running the
/// cell kernels on unit vectors. Shared by the Vanka patch assembly and the
/// sparse oracle, which keeps them consistent with the matrix-free apply.
struct ElementMatrices
{
  Eigen::MatrixXd mass;     // n1^2 x n1^2, scalar
  Eigen::MatrixXd laplace;  // n1^2 x n1^2, scalar
  Eigen::MatrixXd div;      // np x 2*n1^2, [d/dx block | d/dy block]
  Eigen::MatrixXd grad_div; // 2*n1^2 x 2*n1^2, couples the components
};

/// Matrix-free application of the space-time block operator of one
/// subinterval,
///   D = [ K (x) M_h + M^tau (x) (nu A_h + gamma G_h) ,  -M^tau (x) B_h^T ]
///       [ M^tau (x) B_h                              ,   0               ]
/// with B_h the (positive) divergence pairing, so the discrete pressure
/// carries the sign of the momentum equation's -<p, div w> term, and G_h
/// the grad-div pairing <div v, div w> (gamma = 0 recovers the plain
/// Galerkin form). Velocity dofs on the Dirichlet boundary are eliminated:
/// the constrained operator acts as the identity on them.
class SpaceTimeBlockOperator
{
public:
  SpaceTimeBlockOperator(const VelocitySpace &   vspace,
                         const PressureSpace &   pspace,
                         const TemporalMatrices &tmat,
                         double                  nu,
                         double                  grad_div = 0.0);

  const VelocitySpace &velocity_space() const { return *vspace_; }
  const PressureSpace &pressure_space() const { return *pspace_; }
  const TemporalMatrices &temporal() const { return *tmat_; }
  double viscosity() const { return nu_; }
  double grad_div_coefficient() const { return grad_div_; }
  int n_slots() const { return tmat_->n_dofs(); }

  BlockVector make_vector() const
  {
    return BlockVector(n_slots(), vspace_->n_dofs(), pspace_->n_dofs());
  }

  /// y = M_h v.
  void apply_velocity_mass(const Eigen::Ref<const Eigen::VectorXd> &v,
                           Eigen::Ref<Eigen::VectorXd>              y) const;
  /// y = A_h v (unscaled Laplacian; nu enters at block level).
  void apply_laplace(const Eigen::Ref<const Eigen::VectorXd> &v,
                     Eigen::Ref<Eigen::VectorXd>              y) const;
  /// p = B_h v.
  void apply_div(const Eigen::Ref<const Eigen::VectorXd> &v,
                 Eigen::Ref<Eigen::VectorXd>              p) const;
  /// v = B_h^T p.
  void apply_div_transpose(const Eigen::Ref<const Eigen::VectorXd> &p,
                           Eigen::Ref<Eigen::VectorXd>              v) const;
  /// y = M_h^p p (diagonal).
  void apply_pressure_mass(const Eigen::Ref<const Eigen::VectorXd> &p,
                           Eigen::Ref<Eigen::VectorXd>              y) const;
  /// y = G_h v, the unscaled grad-div operator.
  void apply_grad_div(const Eigen::Ref<const Eigen::VectorXd> &v,
                      Eigen::Ref<Eigen::VectorXd>              y) const;

  /// y = D x with Dirichlet elimination (identity on constrained rows).
  void apply_block(const BlockVector &x, BlockVector &y) const;
  /// y = D x without any constraint handling; used for boundary lifting.
  void apply_block_raw(const BlockVector &x, BlockVector &y) const;

  /// Right-hand side contribution -C^n X_{n-1} = +C^tau (x) [M_h; 0] V_prev
  /// of the previous subinterval's endpoint velocity (or initial value).
  BlockVector coupling_rhs(const Eigen::Ref<const Eigen::VectorXd> &v_prev) const;

  /// Load vector of the force f on the subinterval (t_start, t_start+tau],
  /// temporal integration by the right Radau rule. Pressure rows stay zero;
  /// constrained rows are zeroed.
  BlockVector assemble_rhs(const ForceFn &f, double t_start) const;

  /// Explicit sparse matrix of the constrained operator, for testing and the
  /// coarse direct solve. Guarded against accidental large assemblies.
  Eigen::SparseMatrix<double> assemble_sparse_oracle() const;

  const ElementMatrices &element_matrices() const { return elem_; }
  const CellKernels &kernels() const { return kernels_; }

private:
  void apply_block_impl(const BlockVector &x, BlockVector &y, bool constrain) const;

  const VelocitySpace *   vspace_;
  const PressureSpace *   pspace_;
  const TemporalMatrices *tmat_;
  double                  nu_;
  double                  grad_div_;
  CellKernels             kernels_;
  ElementMatrices         elem_;
};

/// Element matrices via unit-vector application of the cell kernels.
ElementMatrices extract_element_matrices(const CellKernels &kernels);

} // namespace stmg
