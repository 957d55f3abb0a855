#include "stmg/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace stmg
{

CoarseSolver::CoarseSolver(const SpaceTimeBlockOperator &op, int dof_cap)
  : op_(&op)
{
  const Eigen::Index total =
    op.n_slots() * (op.velocity_space().n_dofs() + op.pressure_space().n_dofs());
  if (total > dof_cap)
    throw std::runtime_error("CoarseSolver: coarse level exceeds dof cap");

  matrix_ = op.assemble_sparse_oracle();

  const Eigen::Index mv = op.velocity_space().n_dofs();
  const Eigen::Index mp = op.pressure_space().n_dofs();
  for (int a = 0; a < op.n_slots(); ++a)
    pinned_.push_back(op.n_slots() * mv + a * mp);

  // Replace the pinned rows by identity rows.
  std::vector<char> pin_mask(matrix_.rows(), 0);
  for (const Eigen::Index p : pinned_)
    pin_mask[p] = 1;
  for (int col = 0; col < matrix_.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, col); it; ++it)
      if (pin_mask[it.row()])
        it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
  for (const Eigen::Index p : pinned_)
    matrix_.coeffRef(p, p) = 1.0;
  matrix_.prune(0.0);
  matrix_.makeCompressed();

  lu_.compute(matrix_);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("CoarseSolver: singular coarse matrix");
}

BlockVector
CoarseSolver::solve(const BlockVector &b) const
{
  BlockVector     x = op_->make_vector();
  Eigen::VectorXd rhs = b.flat();
  for (const Eigen::Index p : pinned_)
    rhs(p) = 0.0;
  x.flat() = lu_.solve(rhs);
  for (int a = 0; a < x.n_slots(); ++a)
    op_->pressure_space().project_mean_zero(x.pressure(a));
  return x;
}

VCycle::VCycle(const LevelHierarchy &levels, const VCycleConfig &config)
  : levels_(&levels)
  , config_(config)
{
  coarse_ = std::make_unique<CoarseSolver>(*levels.level(0).op, config.coarse_dof_cap);
}

BlockVector
VCycle::apply(const BlockVector &b) const
{
  return cycle(levels_->n_levels() - 1, b);
}

BlockVector
VCycle::cycle(int l, const BlockVector &b) const
{
  const MultigridLevel &level = levels_->level(l);
  if (l == 0)
    return coarse_->solve(b);

  BlockVector x = level.op->make_vector();
  for (int s = 0; s < config_.nu1; ++s)
    level.smoother->smooth_step(*level.op, b, x, config_.omega);

  BlockVector residual = level.op->make_vector();
  level.op->apply_block(x, residual);
  residual *= -1.0;
  residual += b;

  const BlockVector coarse_rhs =
    level.to_coarser->restrict_residual(residual, config_.project_pressure);
  const BlockVector coarse_corr = cycle(l - 1, coarse_rhs);
  x += level.to_coarser->prolongate_correction(coarse_corr, config_.project_pressure);

  for (int s = 0; s < config_.nu2; ++s)
    level.smoother->smooth_step(*level.op, b, x, config_.omega);
  return x;
}

GmresResult
gmres(const ApplyFn &     apply,
      const PrecondFn &   precondition,
      const BlockVector & b,
      const BlockVector & x0,
      const KrylovConfig &config)
{
  GmresResult result;
  result.x = x0;

  BlockVector r = b;
  {
    BlockVector sx = b;
    apply(x0, sx);
    r -= sx;
  }
  const double norm_b = b.norm();
  const double tol    = std::max(config.rtol * norm_b, config.atol);

  double beta = r.norm();
  result.residual_history.push_back(beta);
  if (beta <= tol)
    {
      result.converged = true;
      return result;
    }

  const int m = std::min(config.max_iterations, config.max_basis);

  std::vector<BlockVector> basis;     // Arnoldi vectors
  std::vector<BlockVector> z_basis;   // preconditioned basis
  basis.reserve(m + 1);
  z_basis.reserve(m);

  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd g    = Eigen::VectorXd::Zero(m + 1);
  Eigen::VectorXd cs(m), sn(m);
  g(0) = beta;

  BlockVector v0 = r;
  v0 *= 1.0 / beta;
  basis.push_back(std::move(v0));

  int j = 0;
  for (; j < m; ++j)
    {
      z_basis.push_back(precondition(basis[j]));
      BlockVector w = b;
      apply(z_basis[j], w);

      // Modified Gram-Schmidt
      for (int i = 0; i <= j; ++i)
        {
          hess(i, j) = w.dot(basis[i]);
          BlockVector tmp = basis[i];
          tmp *= hess(i, j);
          w -= tmp;
        }
      const double h_next    = w.norm();
      const bool   breakdown = !(h_next > 1e-300);

      // Apply the accumulated Givens rotations to the new column, then the
      // rotation eliminating the subdiagonal entry h_next.
      for (int i = 0; i < j; ++i)
        {
          const double t = cs(i) * hess(i, j) + sn(i) * hess(i + 1, j);
          hess(i + 1, j) = -sn(i) * hess(i, j) + cs(i) * hess(i + 1, j);
          hess(i, j)     = t;
        }
      const double denom = std::hypot(hess(j, j), h_next);
      cs(j)              = hess(j, j) / denom;
      sn(j)              = h_next / denom;
      hess(j, j)         = denom;
      g(j + 1)           = -sn(j) * g(j);
      g(j)               = cs(j) * g(j);

      const double res = std::abs(g(j + 1));
      result.residual_history.push_back(res);

      if (res <= tol || breakdown)
        {
          // A breakdown means the Krylov space is exhausted; the residual is
          // then exact up to roundoff.
          ++j;
          result.converged = res <= tol || breakdown;
          break;
        }
      BlockVector v = w;
      v *= 1.0 / h_next;
      basis.push_back(std::move(v));
    }

  const int iters = std::min(j, m);
  result.iterations = iters;
  if (iters > 0)
    {
      const Eigen::VectorXd y = hess.topLeftCorner(iters, iters)
                                  .triangularView<Eigen::Upper>()
                                  .solve(g.head(iters));
      for (int i = 0; i < iters; ++i)
        {
          BlockVector tmp = z_basis[i];
          tmp *= y(i);
          result.x += tmp;
        }
    }
  return result;
}

TimeMarchResult
time_march(const LevelHierarchy &  levels,
           const TimeMarchProblem &problem,
           int                     n_steps,
           const VCycleConfig &    mg_config,
           const KrylovConfig &    krylov_config,
           bool                    keep_trajectory)
{
  const MultigridLevel &fine = levels.finest();
  const SpaceTimeBlockOperator &op = *fine.op;
  const VelocitySpace &         vs = *fine.vspace;
  const PressureSpace &         ps = *fine.pspace;
  const double                  tau = fine.desc.tau;
  const int                     ns  = op.n_slots();

  const VCycle vcycle(levels, mg_config);
  const ApplyFn apply = [&op](const BlockVector &x, BlockVector &y) {
    op.apply_block(x, y);
  };
  const PrecondFn precond = [&vcycle](const BlockVector &r) {
    return vcycle.apply(r);
  };

  TimeMarchResult result;

  Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(vs.n_dofs());
  if (problem.initial_velocity)
    {
      for (int s = 0; s < vs.n_scalar_dofs(); ++s)
        for (int comp = 0; comp < 2; ++comp)
          v_prev(vs.global_dof(comp, s)) =
            problem.initial_velocity(vs.node_x(s), vs.node_y(s), comp);
    }

  Eigen::VectorXd work_v(vs.n_dofs());
  Eigen::VectorXd work_p(ps.n_dofs());

  const auto t_begin = std::chrono::steady_clock::now();
  double     iter_sum = 0.0;

  for (int n = 1; n <= n_steps; ++n)
    {
      const auto   t_step0  = std::chrono::steady_clock::now();
      const double t_start  = (n - 1) * tau;

      BlockVector rhs = problem.force ? op.assemble_rhs(problem.force, t_start) :
                                        op.make_vector();
      rhs += op.coupling_rhs(v_prev);

      BlockVector lift = op.make_vector();
      const bool  inhomogeneous = static_cast<bool>(problem.boundary);
      if (inhomogeneous)
        {
          for (int a = 0; a < ns; ++a)
            {
              const double t_a =
                t_start + 0.5 * tau * (fine.tmat->nodes(a) + 1.0);
              vs.set_boundary_values(lift.velocity(a), problem.boundary, t_a);
            }
          BlockVector lifted = op.make_vector();
          op.apply_block_raw(lift, lifted);
          rhs -= lifted;
        }
      for (int a = 0; a < ns; ++a)
        vs.zero_constrained(rhs.velocity(a));

      GmresResult solve =
        gmres(apply, precond, rhs, op.make_vector(), krylov_config);
      if (!solve.converged)
        {
          result.converged = false;
          throw std::runtime_error(
            "time_march: GMRES failed to converge in step " + std::to_string(n) +
            " (residual " + std::to_string(solve.residual_history.back()) + ")");
        }

      BlockVector x = std::move(solve.x);
      if (inhomogeneous)
        x += lift;
      for (int a = 0; a < ns; ++a)
        ps.project_mean_zero(x.pressure(a));

      // Saddle-point health of the converged step.
      double max_div = 0.0, max_mean = 0.0;
      for (int a = 0; a < ns; ++a)
        {
          op.apply_div(x.velocity(a), work_p);
          op.apply_velocity_mass(x.velocity(a), work_v);
          const double vnorm = std::sqrt(std::abs(x.velocity(a).dot(work_v)));
          if (vnorm > 0.0)
            max_div = std::max(max_div, work_p.norm() / vnorm);
          const double pnorm = x.pressure(a).norm();
          if (pnorm > 0.0)
            max_mean = std::max(
              max_mean, std::abs(ps.mean_vector().dot(x.pressure(a))) / pnorm);
        }

      const auto t_step1 = std::chrono::steady_clock::now();
      StepRecord record;
      record.step       = n;
      record.iterations = solve.iterations;
      record.residual   = solve.residual_history.back();
      record.seconds    = std::chrono::duration<double>(t_step1 - t_step0).count();
      record.max_divergence    = max_div;
      record.max_pressure_mean = max_mean;
      result.steps.push_back(record);
      iter_sum += solve.iterations;

      v_prev = x.velocity(ns - 1);
      if (keep_trajectory)
        result.trajectory.push_back(std::move(x));
    }

  const auto t_end = std::chrono::steady_clock::now();
  result.total_seconds  = std::chrono::duration<double>(t_end - t_begin).count();
  result.avg_iterations = iter_sum / n_steps;
  result.dofs_processed = static_cast<std::uint64_t>(n_steps) * ns *
                          (vs.n_dofs() + ps.n_dofs());
  result.throughput =
    result.total_seconds > 0.0 ? result.dofs_processed / result.total_seconds : 0.0;
  return result;
}

} // namespace stmg
