#pragma once

#include "stmg/block_vector.hpp"
#include "stmg/hierarchy.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <functional>
#include <vector>

namespace stmg
{

struct VCycleConfig
{
  int    nu1              = 1;
  int    nu2              = 1;
  double omega            = 0.8;
  bool   project_pressure = true;
  int    coarse_dof_cap   = 50000;
};

struct KrylovConfig
{
  double rtol           = 1e-8;
  double atol           = 1e-14;
  int    max_iterations = 200;
  int    max_basis      = 200;
};

/// Direct factorization of the assembled coarsest-level operator. The
/// per-slot constant-pressure nullspace is removed by pinning the first
/// pressure dof of each temporal slot; solutions are shifted to zero mean.
class CoarseSolver
{
public:
  CoarseSolver(const SpaceTimeBlockOperator &op, int dof_cap);

  BlockVector solve(const BlockVector &b) const;

private:
  const SpaceTimeBlockOperator *     op_;
  Eigen::SparseMatrix<double>        matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  std::vector<Eigen::Index>          pinned_;
};

/// The hp space-time multigrid V-cycle, used as a preconditioner. Applied
/// with zero initial guess it is a linear operator.
class VCycle
{
public:
  VCycle(const LevelHierarchy &levels, const VCycleConfig &config);

  /// One V-cycle on the finest level for right-hand side b.
  BlockVector apply(const BlockVector &b) const;

  const VCycleConfig &config() const { return config_; }
  const LevelHierarchy &levels() const { return *levels_; }

private:
  BlockVector cycle(int level, const BlockVector &b) const;

  const LevelHierarchy *levels_;
  VCycleConfig          config_;
  std::unique_ptr<CoarseSolver> coarse_;
};

using ApplyFn   = std::function<void(const BlockVector &, BlockVector &)>;
using PrecondFn = std::function<BlockVector(const BlockVector &)>;

struct GmresResult
{
  BlockVector         x;
  int                 iterations = 0;
  bool                converged  = false;
  std::vector<double> residual_history;
};

/// Right-preconditioned GMRES without restart. Stops when the residual
/// reaches max(rtol*|b|, atol) or the basis/iteration caps are hit.
GmresResult gmres(const ApplyFn &     apply,
                  const PrecondFn &   precondition,
                  const BlockVector & b,
                  const BlockVector & x0,
                  const KrylovConfig &config);

struct StepRecord
{
  int    step;
  int    iterations;
  double residual;
  double seconds;
  double max_divergence;     // max_a |B v^a| / |v^a|_M
  double max_pressure_mean;  // max_a |<p^a, m>| / |p^a|
};

struct TimeMarchResult
{
  std::vector<BlockVector> trajectory;
  std::vector<StepRecord>  steps;
  double                   avg_iterations = 0.0;
  double                   total_seconds  = 0.0;
  std::uint64_t            dofs_processed = 0;
  double                   throughput     = 0.0;
  bool                     converged      = true;
};

/// Volume force and (optional) Dirichlet data of one run.
struct TimeMarchProblem
{
  ForceFn         force;             // null -> zero force
  BoundaryValueFn boundary;          // null -> homogeneous
  std::function<double(double, double, int)> initial_velocity; // null -> zero
};

/// Ntilde = 1 time marching: solve the subinterval systems one after the
/// other with V-cycle-preconditioned GMRES and hand off the endpoint
/// velocity coefficients.
TimeMarchResult time_march(const LevelHierarchy &  levels,
                           const TimeMarchProblem &problem,
                           int                     n_steps,
                           const VCycleConfig &    mg_config,
                           const KrylovConfig &    krylov_config,
                           bool                    keep_trajectory = true);

} // namespace stmg
