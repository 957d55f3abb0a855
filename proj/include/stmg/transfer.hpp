#pragma once

#include "stmg/block_vector.hpp"
#include "stmg/dof_space.hpp"
#include "stmg/time_basis.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <string>

namespace stmg
{

enum class TransferKind
{
  identity,
  h_space,
  p_space,
  p_time,
  h_space_p_time,
  p_space_p_time,
};

std::string to_string(TransferKind kind);

/// Canonical prolongation/restriction between two consecutive hierarchy
/// levels. The spatial part is cached as sparse per-component matrices, the
/// temporal part as a dense node-evaluation matrix acting blockwise; the
/// restriction is the coefficient-space transpose of the prolongation by
/// construction. Prolongation of a coarse-space function is exact (nested
/// spaces), which keeps the pressure mean intact.
class TransferPair
{
public:
  TransferKind kind() const { return kind_; }

  /// Coarse-to-fine.
  BlockVector prolongate(const BlockVector &coarse) const;
  /// Fine-to-coarse, the transpose map.
  BlockVector restrict_(const BlockVector &fine) const;

  /// Transfer with constraint and subspace handling: prolongated corrections
  /// get zeroed fine boundary entries, restricted residuals zeroed coarse
  /// boundary rows; the pressure is projected mean-zero when requested.
  BlockVector prolongate_correction(const BlockVector &coarse,
                                    bool               project_pressure) const;
  BlockVector restrict_residual(const BlockVector &fine,
                                bool               project_pressure) const;

  const Eigen::SparseMatrix<double> &velocity_matrix() const { return p_vel_; }
  const Eigen::SparseMatrix<double> &pressure_matrix() const { return p_pre_; }
  bool has_spatial() const { return has_spatial_; }
  bool has_temporal() const { return has_temporal_; }
  const Eigen::MatrixXd &temporal_matrix() const { return e_time_; }

  static TransferPair identity(const VelocitySpace &vspace,
                               const PressureSpace &pspace,
                               int                  k);

private:
  friend TransferPair build_h_space_transfer(const VelocitySpace &,
                                             const PressureSpace &,
                                             const VelocitySpace &,
                                             const PressureSpace &,
                                             int);
  friend TransferPair build_p_space_transfer(const VelocitySpace &,
                                             const PressureSpace &,
                                             const VelocitySpace &,
                                             const PressureSpace &,
                                             int);
  friend TransferPair build_p_time_transfer(int, int,
                                            const VelocitySpace &,
                                            const PressureSpace &);
  friend TransferPair combine_space_time_transfer(TransferPair, TransferPair);

  TransferKind kind_ = TransferKind::identity;

  bool has_spatial_  = false;
  bool has_temporal_ = false;

  // Scalar velocity prolongation (fine x coarse) applied per component, and
  // the pressure prolongation.
  Eigen::SparseMatrix<double> p_vel_;
  Eigen::SparseMatrix<double> p_pre_;

  // Temporal node evaluation matrix, (k_fine+1) x (k_coarse+1).
  Eigen::MatrixXd e_time_;

  int k_coarse_ = 0, k_fine_ = 0;

  const VelocitySpace *vspace_coarse_ = nullptr;
  const VelocitySpace *vspace_fine_   = nullptr;
  const PressureSpace *pspace_coarse_ = nullptr;
  const PressureSpace *pspace_fine_   = nullptr;
};

/// Geometric transfer between consecutive nested mesh levels at fixed r.
TransferPair build_h_space_transfer(const VelocitySpace &vspace_coarse,
                                    const PressureSpace &pspace_coarse,
                                    const VelocitySpace &vspace_fine,
                                    const PressureSpace &pspace_fine,
                                    int                  k);

/// Polynomial transfer r/2 -> r on one mesh level.
TransferPair build_p_space_transfer(const VelocitySpace &vspace_coarse,
                                    const PressureSpace &pspace_coarse,
                                    const VelocitySpace &vspace_fine,
                                    const PressureSpace &pspace_fine,
                                    int                  k);

/// Temporal polynomial transfer k/2 -> k (Radau-node re-evaluation),
/// blockwise over the spatial dofs of the given spaces.
TransferPair build_p_time_transfer(int                  k_coarse,
                                   int                  k_fine,
                                   const VelocitySpace &vspace,
                                   const PressureSpace &pspace);

/// Concatenate a spatial with a temporal transfer into one pair.
TransferPair combine_space_time_transfer(TransferPair spatial, TransferPair temporal);

} // namespace stmg
