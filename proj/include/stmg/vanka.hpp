#pragma once

#include "stmg/st_operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace stmg
{

enum class SmootherKind
{
  cell,
  vertex_star,
};

/// One Vanka patch: the flat BlockVector indices of its dofs, the factored
/// local restriction of the level operator, and the valence weights applied
/// after the local solve. A patch that spans the whole domain carries the
/// constant-pressure nullspace; such patches fall back to a rank-revealing
/// decomposition whose min-norm solve keeps the correction mean-free.
struct PatchFactorization
{
  std::vector<Eigen::Index>            dofs;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  std::unique_ptr<Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>> cod;
  Eigen::VectorXd                      weights;

  int size() const { return static_cast<int>(dofs.size()); }

  Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const
  {
    if (cod)
      return cod->solve(rhs);
    return lu.solve(rhs);
  }
};

/// Additive space-time Vanka smoother. Patches span all k+1 temporal dofs
/// of the subinterval; constrained velocity dofs are excluded. Local
/// matrices come from the operator's element matrices, which are extracted
/// through the same cell kernels as the matrix-free apply.
class VankaSmoother
{
public:
  static VankaSmoother build(const SpaceTimeBlockOperator &op, SmootherKind kind);
  /// One patch per spatial cell, all k+1 temporal dofs.
  static VankaSmoother build_cell_patches(const SpaceTimeBlockOperator &op)
  {
    return build(op, SmootherKind::cell);
  }
  /// One patch per vertex: all velocity and pressure dofs of the member
  /// cells; cell-based in time.
  static VankaSmoother build_vertex_star_patches(const SpaceTimeBlockOperator &op)
  {
    return build(op, SmootherKind::vertex_star);
  }

  SmootherKind kind() const { return kind_; }
  const std::vector<PatchFactorization> &patches() const { return patches_; }

  /// out = sum_T R_T^T w (R_T S R_T^T)^{-1} R_T residual.
  void apply_additive(const BlockVector &residual, BlockVector &out) const;

  /// u <- u + omega * apply_additive(b - S u).
  void smooth_step(const SpaceTimeBlockOperator &op,
                   const BlockVector &           b,
                   BlockVector &                 u,
                   double                        omega) const;

  /// Sum of n_T^2 over all patches (stored local matrix elements).
  std::uint64_t total_matrix_elements() const;
  /// Nominal interior cell-patch block size (k+1)(d(r+2)^d + (r+1)^d),
  /// counting (r+1)^d pressure dofs as if the space were tensor-product;
  /// the true count uses dim P_r^disc and is smaller. Reported side by side
  /// in the smoother statistics.
  static std::uint64_t nominal_block_size(int k, int r, int d);

  /// Multiply-add count of the local solves since the last reset.
  std::uint64_t mult_adds() const { return mult_adds_; }
  void reset_mult_adds() const { mult_adds_ = 0; }

private:
  SmootherKind                    kind_ = SmootherKind::cell;
  std::vector<PatchFactorization> patches_;
  mutable std::uint64_t           mult_adds_ = 0;
};

} // namespace stmg
