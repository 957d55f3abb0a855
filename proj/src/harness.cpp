#include "stmg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace stmg
{

namespace
{
  // Default time-step count: tau = h/2, i.e. one extra global refinement in
  // time relative to the spatial mesh.
  int
  default_steps(double t_end, int refinements)
  {
    return static_cast<int>(std::lround(t_end * (1 << (refinements + 1))));
  }
} // namespace

std::vector<LevelDescriptor>
plan_hierarchy(const RunConfig &config, double t_end)
{
  const int    c   = config.refinements;
  const int    k   = config.time_degree();
  const double h   = std::pow(0.5, c);
  const int    n   = config.n_steps > 0 ? config.n_steps : default_steps(t_end, c);
  const double tau = t_end / n;

  const std::vector<HpEntry> spatial =
    config.h_only ? construct_hierarchy(h, 1.0, config.r, config.r) :
                    construct_hierarchy(h, 1.0, config.r, 1);
  const std::vector<HpEntry> temporal =
    config.h_only ? construct_hierarchy(tau, tau, k, k) :
                    construct_hierarchy(tau, tau, k, 1);
  return combine_hierarchies(spatial, temporal);
}

int
step_count(const StokesProblem &problem, const RunConfig &config)
{
  return config.n_steps > 0 ? config.n_steps :
                              default_steps(problem.t_end, config.refinements);
}

Setup
build_setup(const StokesProblem &problem, const RunConfig &config)
{
  if (!config.allow_large && (config.r > 5 || config.refinements > 5))
    throw std::invalid_argument(
      "build_setup: r > 5 or refinements > 5 need allow_large");

  Setup setup;
  setup.mesh = std::make_unique<Mesh>(
    Mesh::build_cartesian(Box{0.0, 0.0, 1.0, 1.0}, 1, 1, config.refinements + 1));
  setup.descriptors = plan_hierarchy(config, problem.t_end);

  HierarchyParams params;
  params.nu       = config.nu;
  params.tau      = problem.t_end / step_count(problem, config);
  params.grad_div = config.grad_div;
  params.smoother = config.smoother;
  setup.levels    = instantiate_levels(*setup.mesh, setup.descriptors, params);
  return setup;
}

ErrorReport
compute_errors(const Setup &          setup,
               const TimeMarchResult &march,
               const ExactSolution &  exact)
{
  const MultigridLevel &fine = setup.levels.finest();
  const VelocitySpace & vs   = *fine.vspace;
  const PressureSpace & ps   = *fine.pspace;
  const TemporalMatrices &tm = *fine.tmat;
  const int             ns   = tm.n_dofs();
  const int             r    = vs.r();
  const double          tau  = tm.tau;

  const NodalBasis1D   time_basis(tm.nodes);
  const QuadratureRule time_quad = gauss_rule(tm.k + 2);
  const Eigen::MatrixXd time_values = time_basis.value_table(time_quad.points);

  const CellKernels eval(vs, ps, r + 3);
  const int         nq = eval.n_q_1d();
  const int         n1 = eval.n_nodes_1d();
  const int         np = ps.dofs_per_cell();
  const Mesh &      mesh  = vs.mesh();
  const int         level = vs.level();

  double sum_v = 0.0, sum_p = 0.0, sum_h1 = 0.0, sum_div = 0.0, linf = 0.0;

  Eigen::VectorXd vbar(vs.n_dofs()), pbar(ps.n_dofs());
  Eigen::MatrixXd ux(n1, n1), uy(n1, n1);

  for (std::size_t step = 0; step < march.trajectory.size(); ++step)
    {
      const BlockVector &x  = march.trajectory[step];
      const double       t0 = static_cast<double>(step) * tau;
      for (int tq = 0; tq < time_quad.size(); ++tq)
        {
          const double t  = t0 + 0.5 * tau * (time_quad.points(tq) + 1.0);
          const double wt = 0.5 * tau * time_quad.weights(tq);

          vbar.setZero();
          pbar.setZero();
          for (int a = 0; a < ns; ++a)
            {
              vbar += time_values(tq, a) * x.velocity(a);
              pbar += time_values(tq, a) * x.pressure(a);
            }

          for (int cell = 0; cell < mesh.n_cells(level); ++cell)
            {
              const Box   box  = mesh.cell_box(level, cell);
              const auto &dofs = vs.cell_scalar_dofs(cell);
              for (std::size_t loc = 0; loc < dofs.size(); ++loc)
                {
                  ux.data()[loc] = vbar(vs.global_dof(0, dofs[loc]));
                  uy.data()[loc] = vbar(vs.global_dof(1, dofs[loc]));
                }
              const Eigen::MatrixXd vxq = eval.phi() * ux * eval.phi().transpose();
              const Eigen::MatrixXd vyq = eval.phi() * uy * eval.phi().transpose();
              const Eigen::MatrixXd dvx_dx =
                eval.dxi_dx() * (eval.dphi() * ux * eval.phi().transpose());
              const Eigen::MatrixXd dvx_dy =
                eval.deta_dy() * (eval.phi() * ux * eval.dphi().transpose());
              const Eigen::MatrixXd dvy_dx =
                eval.dxi_dx() * (eval.dphi() * uy * eval.phi().transpose());
              const Eigen::MatrixXd dvy_dy =
                eval.deta_dy() * (eval.phi() * uy * eval.dphi().transpose());
              const Eigen::VectorXd pq =
                eval.psi() * pbar.segment(ps.cell_dof(cell, 0), np);

              for (int qy = 0; qy < nq; ++qy)
                for (int qx = 0; qx < nq; ++qx)
                  {
                    const double x_pt =
                      box.x0 + 0.5 * box.width() * (eval.qpoints()(qx) + 1.0);
                    const double y_pt =
                      box.y0 + 0.5 * box.height() * (eval.qpoints()(qy) + 1.0);
                    const double wq =
                      wt * eval.qweights()(qx) * eval.qweights()(qy) * eval.jdet();

                    const double ex0 = vxq(qx, qy) - exact.velocity(x_pt, y_pt, t, 0);
                    const double ex1 = vyq(qx, qy) - exact.velocity(x_pt, y_pt, t, 1);
                    sum_v += wq * (ex0 * ex0 + ex1 * ex1);
                    linf = std::max({linf, std::abs(ex0), std::abs(ex1)});

                    const double g00 =
                      dvx_dx(qx, qy) - exact.velocity_gradient(x_pt, y_pt, t, 0, 0);
                    const double g01 =
                      dvx_dy(qx, qy) - exact.velocity_gradient(x_pt, y_pt, t, 0, 1);
                    const double g10 =
                      dvy_dx(qx, qy) - exact.velocity_gradient(x_pt, y_pt, t, 1, 0);
                    const double g11 =
                      dvy_dy(qx, qy) - exact.velocity_gradient(x_pt, y_pt, t, 1, 1);
                    sum_h1 += wq * (g00 * g00 + g01 * g01 + g10 * g10 + g11 * g11);

                    const double divh = dvx_dx(qx, qy) + dvy_dy(qx, qy);
                    sum_div += wq * divh * divh;

                    const double ep =
                      pq(qy * nq + qx) - exact.pressure(x_pt, y_pt, t);
                    sum_p += wq * ep * ep;
                  }
            }
        }
    }

  ErrorReport report;
  report.e_v_l2   = std::sqrt(sum_v);
  report.e_p_l2   = std::sqrt(sum_p);
  report.e_v_h1   = std::sqrt(sum_h1);
  report.e_div    = std::sqrt(sum_div);
  report.e_v_linf = linf;
  return report;
}

TimeMarchResult
interpolate_exact(const Setup &setup, const ExactSolution &exact, int n_steps)
{
  const MultigridLevel &fine = setup.levels.finest();
  const VelocitySpace & vs   = *fine.vspace;
  const PressureSpace & ps   = *fine.pspace;
  const TemporalMatrices &tm = *fine.tmat;
  const int             ns   = tm.n_dofs();
  const double          tau  = tm.tau;
  const int             np   = ps.dofs_per_cell();

  const CellKernels eval(vs, ps, vs.r() + 3);
  const int         nq = eval.n_q_1d();

  TimeMarchResult result;
  for (int n = 1; n <= n_steps; ++n)
    {
      BlockVector x = fine.op->make_vector();
      for (int a = 0; a < ns; ++a)
        {
          const double t = (n - 1) * tau + 0.5 * tau * (tm.nodes(a) + 1.0);
          auto         v = x.velocity(a);
          for (int s = 0; s < vs.n_scalar_dofs(); ++s)
            for (int comp = 0; comp < 2; ++comp)
              v(vs.global_dof(comp, s)) =
                exact.velocity(vs.node_x(s), vs.node_y(s), t, comp);

          // Pressure: per-cell L2 projection in the orthogonal basis.
          auto        p    = x.pressure(a);
          const Mesh &mesh = vs.mesh();
          for (int cell = 0; cell < mesh.n_cells(vs.level()); ++cell)
            {
              const Box box = mesh.cell_box(vs.level(), cell);
              Eigen::VectorXd rhs = Eigen::VectorXd::Zero(np);
              for (int qy = 0; qy < nq; ++qy)
                for (int qx = 0; qx < nq; ++qx)
                  {
                    const double x_pt =
                      box.x0 + 0.5 * box.width() * (eval.qpoints()(qx) + 1.0);
                    const double y_pt =
                      box.y0 + 0.5 * box.height() * (eval.qpoints()(qy) + 1.0);
                    const double wq = eval.qweights()(qx) * eval.qweights()(qy) *
                                      eval.jdet() *
                                      exact.pressure(x_pt, y_pt, t);
                    for (int l = 0; l < np; ++l)
                      rhs(l) += wq * eval.psi()(qy * nq + qx, l);
                  }
              for (int l = 0; l < np; ++l)
                p(cell * np + l) =
                  rhs(l) / (eval.jdet() * ps.basis().gram_diagonal(l));
            }
        }
      result.trajectory.push_back(std::move(x));
    }
  return result;
}

std::vector<ConvergenceRow>
convergence_study(const std::vector<int> &r_list,
                  const std::vector<int> &c_list,
                  const RunConfig &       base)
{
  const StokesProblem         problem = manufactured_problem();
  std::vector<ConvergenceRow> rows;
  for (const int r : r_list)
    {
      const ConvergenceRow *prev = nullptr;
      for (const int c : c_list)
        {
          RunConfig config   = base;
          config.r           = r;
          config.k           = -1;
          config.refinements = c;
          config.nu          = problem.nu;

          Setup           setup = build_setup(problem, config);
          TimeMarchResult march =
            time_march(setup.levels, problem.data, step_count(problem, config),
                       config.mg, config.krylov);

          ConvergenceRow row;
          row.r              = r;
          row.c              = c;
          row.h              = std::pow(0.5, c);
          row.errors         = compute_errors(setup, march, problem.exact);
          row.avg_iterations = march.avg_iterations;
          if (prev != nullptr)
            {
              row.eoc_v   = eoc(prev->errors.e_v_l2, row.errors.e_v_l2);
              row.eoc_p   = eoc(prev->errors.e_p_l2, row.errors.e_p_l2);
              row.eoc_h1  = eoc(prev->errors.e_v_h1, row.errors.e_v_h1);
              row.eoc_div = eoc(prev->errors.e_div, row.errors.e_div);
            }
          rows.push_back(row);
          prev = &rows.back();
        }
    }
  return rows;
}

std::vector<RobustnessRow>
robustness_sweep(const std::vector<int> &         r_list,
                 const std::vector<int> &         c_list,
                 const std::vector<SmootherKind> &kinds,
                 const std::vector<int> &         n_sm_list,
                 const RunConfig &                base)
{
  const StokesProblem        problem = manufactured_problem();
  std::vector<RobustnessRow> rows;
  for (const int r : r_list)
    for (const int c : c_list)
      for (const SmootherKind kind : kinds)
        for (const int n_sm : n_sm_list)
          {
            RunConfig config   = base;
            config.r           = r;
            config.k           = -1;
            config.refinements = c;
            config.nu          = problem.nu;
            config.smoother    = kind;
            config.mg.nu1      = n_sm;
            config.mg.nu2      = n_sm;

            Setup           setup = build_setup(problem, config);
            TimeMarchResult march =
              time_march(setup.levels, problem.data,
                         step_count(problem, config), config.mg, config.krylov,
                         /*keep_trajectory=*/false);

            std::uint64_t sum_nt2 = 0;
            for (int l = 1; l < setup.levels.n_levels(); ++l)
              sum_nt2 += setup.levels.level(l).smoother->total_matrix_elements();

            rows.push_back(RobustnessRow{
              r, c, kind == SmootherKind::cell ? "cell" : "vertex_star", n_sm,
              march.avg_iterations, sum_nt2, march.throughput});
          }
  return rows;
}

double
evaluate_pressure(const PressureSpace &                    space,
                  const Eigen::Ref<const Eigen::VectorXd> &coeffs,
                  double                                   x,
                  double                                   y)
{
  const Mesh &mesh  = space.mesh();
  const int   level = space.level();
  const Box   dom   = mesh.domain();
  const int   nx = mesh.cells_x(level), ny = mesh.cells_y(level);
  const int   ix = std::min(static_cast<int>((x - dom.x0) / mesh.hx(level)), nx - 1);
  const int   iy = std::min(static_cast<int>((y - dom.y0) / mesh.hy(level)), ny - 1);
  const int   cell = mesh.cell_index(level, ix, iy);
  const Box   box  = mesh.cell_box(level, cell);

  Eigen::VectorXd xi(2);
  xi << 2.0 * (x - box.x0) / box.width() - 1.0,
    2.0 * (y - box.y0) / box.height() - 1.0;
  double v = 0.0;
  for (int l = 0; l < space.dofs_per_cell(); ++l)
    v += coeffs(space.cell_dof(cell, l)) * space.basis().value(l, xi);
  return v;
}

double
evaluate_velocity(const VelocitySpace &                    space,
                  const Eigen::Ref<const Eigen::VectorXd> &coeffs,
                  double x, double y, int comp)
{
  const Mesh &mesh  = space.mesh();
  const int   level = space.level();
  const Box   dom   = mesh.domain();
  const int   nx = mesh.cells_x(level), ny = mesh.cells_y(level);
  const int   ix = std::min(static_cast<int>((x - dom.x0) / mesh.hx(level)), nx - 1);
  const int   iy = std::min(static_cast<int>((y - dom.y0) / mesh.hy(level)), ny - 1);
  const int   cell = mesh.cell_index(level, ix, iy);
  const Box   box  = mesh.cell_box(level, cell);

  const double xi  = 2.0 * (x - box.x0) / box.width() - 1.0;
  const double eta = 2.0 * (y - box.y0) / box.height() - 1.0;
  const auto & b   = space.basis_1d();
  const int    n1  = space.nodes_per_dir();
  const auto & dofs = space.cell_scalar_dofs(cell);
  double       v    = 0.0;
  for (int jy = 0; jy < n1; ++jy)
    for (int jx = 0; jx < n1; ++jx)
      v += coeffs(space.global_dof(comp, dofs[jy * n1 + jx])) * b.value(jx, xi) *
           b.value(jy, eta);
  return v;
}

CavityResult
cavity_demo_2d(int c, int r, const RunConfig &base)
{
  RunConfig config   = base;
  config.r           = r;
  config.refinements = c;

  const StokesProblem problem = cavity_problem(config.nu);
  Setup               setup   = build_setup(problem, config);
  const int           n_steps = step_count(problem, config);

  CavityResult result;
  result.march = time_march(setup.levels, problem.data, n_steps, config.mg,
                            config.krylov);

  const MultigridLevel &fine = setup.levels.finest();
  const double          tau  = fine.tmat->tau;
  const int             last = fine.tmat->n_dofs() - 1;
  for (int n = 1; n <= n_steps; ++n)
    {
      const auto & x  = result.march.trajectory[n - 1];
      const double p1 = evaluate_pressure(*fine.pspace, x.pressure(last), 0.875, 0.125);
      const double p2 = evaluate_pressure(*fine.pspace, x.pressure(last), 0.875, 0.875);
      CavitySample sample;
      sample.t        = n * tau;
      sample.p_probe1 = p1;
      sample.p_probe2 = p2;
      sample.valid    = std::abs(p1) >= 1e-12;
      sample.p_diff   = sample.valid ? (p1 - p2) / p1 : 0.0;
      result.trace.push_back(sample);
    }
  return result;
}

namespace
{
  std::ofstream
  open_csv(const std::string &path)
  {
    std::ofstream out(path);
    if (!out)
      throw std::runtime_error("cannot open output file: " + path);
    out.precision(12);
    return out;
  }
} // namespace

void
write_convergence_csv(const std::string &path, const std::vector<ConvergenceRow> &rows)
{
  auto out = open_csv(path);
  out << "r,c,h,e_v_L2,eoc,e_p_L2,eoc,e_v_H1,eoc,e_div,eoc\n";
  for (const auto &row : rows)
    out << row.r << ',' << row.c << ',' << row.h << ',' << row.errors.e_v_l2
        << ',' << row.eoc_v << ',' << row.errors.e_p_l2 << ',' << row.eoc_p
        << ',' << row.errors.e_v_h1 << ',' << row.eoc_h1 << ','
        << row.errors.e_div << ',' << row.eoc_div << '\n';
}

void
write_robustness_csv(const std::string &path, const std::vector<RobustnessRow> &rows)
{
  auto out = open_csv(path);
  out << "r,c,smoother,n_sm,avg_iters,sum_nT2\n";
  for (const auto &row : rows)
    out << row.r << ',' << row.c << ',' << row.smoother << ',' << row.n_sm
        << ',' << row.avg_iterations << ',' << row.sum_nt2 << '\n';
}

void
write_cavity_csv(const std::string &path, const CavityResult &result)
{
  auto out = open_csv(path);
  out << "t,p_probe1,p_probe2,p_diff\n";
  for (const auto &s : result.trace)
    {
      out << s.t << ',' << s.p_probe1 << ',' << s.p_probe2 << ',';
      if (s.valid)
        out << s.p_diff;
      out << '\n';
    }
}

void
write_steps_csv(const std::string &path, const TimeMarchResult &march)
{
  auto out = open_csv(path);
  out << "step,iterations,residual,seconds\n";
  for (const auto &s : march.steps)
    out << s.step << ',' << s.iterations << ',' << s.residual << ','
        << s.seconds << '\n';
  out << "# avg_iterations=" << march.avg_iterations
      << " throughput_dofs_per_s=" << march.throughput << '\n';
}

std::vector<SmootherLevelStats>
smoother_stats(const Setup &setup)
{
  std::vector<SmootherLevelStats> stats;
  for (int l = 1; l < setup.levels.n_levels(); ++l)
    {
      const MultigridLevel &level = setup.levels.level(l);
      SmootherLevelStats    s;
      s.level       = l;
      s.r           = level.desc.r;
      s.k           = level.desc.k;
      s.h           = level.desc.h;
      s.patch_count = level.smoother->patches().size();
      s.block_min   = std::numeric_limits<int>::max();
      s.block_max   = 0;
      for (const auto &patch : level.smoother->patches())
        {
          s.block_min = std::min(s.block_min, patch.size());
          s.block_max = std::max(s.block_max, patch.size());
        }
      s.sum_nt2       = level.smoother->total_matrix_elements();
      s.nominal_block = VankaSmoother::nominal_block_size(s.k, s.r, 2);
      stats.push_back(s);
    }
  return stats;
}

void
print_smoother_stats(const std::vector<SmootherLevelStats> &stats)
{
  std::printf("level |  h        r  k | patches |  n_T (min..max) | nominal |"
              " sum n_T^2\n");
  for (auto it = stats.rbegin(); it != stats.rend(); ++it)
    std::printf("%5d | %-8.4g %2d %2d | %7zu | %6d..%-7d | %7llu | %llu\n",
                it->level, it->h, it->r, it->k, it->patch_count, it->block_min,
                it->block_max,
                static_cast<unsigned long long>(it->nominal_block),
                static_cast<unsigned long long>(it->sum_nt2));
}

namespace
{
  void
  add_check(std::vector<CheckResult> &results,
            const std::string &       name,
            bool                      passed,
            double                    value,
            double                    bound)
  {
    std::ostringstream detail;
    detail.precision(3);
    detail << value << " (bound " << bound << ")";
    results.push_back(CheckResult{name, passed, detail.str()});
  }

  BlockVector
  random_block_vector(const SpaceTimeBlockOperator &op, std::mt19937 &rng)
  {
    BlockVector                            x = op.make_vector();
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x.flat()(i) = dist(rng);
    return x;
  }
} // namespace

std::vector<CheckResult>
run_selftest()
{
  std::vector<CheckResult> results;
  std::mt19937             rng(20240817);

  // Quadrature sanity: Radau-2 node/weight values and monomial exactness.
  {
    const QuadratureRule radau2 = gauss_radau_right(2);
    const double node_err = std::abs(radau2.points(0) + 1.0 / 3.0) +
                            std::abs(radau2.points(1) - 1.0);
    const double weight_err = std::abs(radau2.weights(0) - 1.5) +
                              std::abs(radau2.weights(1) - 0.5);
    add_check(results, "gauss_radau_right(2) nodes/weights",
              node_err + weight_err < 1e-14, node_err + weight_err, 1e-14);

    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
      {
        const QuadratureRule rule = gauss_radau_right(n);
        for (int d = 0; d <= 2 * n - 2; ++d)
          {
            double integral = 0.0;
            for (int q = 0; q < n; ++q)
              integral += rule.weights(q) * std::pow(rule.points(q), d);
            const double exact_moment = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
            worst = std::max(worst, std::abs(integral - exact_moment));
          }
      }
    add_check(results, "gauss_radau_right exactness n<=6", worst < 1e-13, worst,
              1e-13);
  }

  // Matrix-free operators against the assembled oracle on small meshes.
  const Mesh mesh = Mesh::build_cartesian(Box{0.0, 0.0, 1.0, 1.0}, 1, 1, 3);
  for (const int r : {1, 2})
    for (const int k : {1, 2})
      {
        const VelocitySpace    vs(mesh, 2, r); // 4x4 cells
        const PressureSpace    ps(mesh, 2, r);
        const TemporalMatrices tm = temporal_matrices(k, 0.25);
        const SpaceTimeBlockOperator op(vs, ps, tm, 0.1, 1.0);
        const Eigen::SparseMatrix<double> oracle = op.assemble_sparse_oracle();

        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial)
          {
            BlockVector x = random_block_vector(op, rng);
            for (int a = 0; a <= k; ++a)
              vs.zero_constrained(x.velocity(a));
            BlockVector y = op.make_vector();
            op.apply_block(x, y);
            const Eigen::VectorXd ref = oracle * x.flat();
            worst = std::max(worst, (y.flat() - ref).norm() / ref.norm());
          }
        std::ostringstream name;
        name << "matrix-free D vs oracle (r=" << r << ", k=" << k << ")";
        add_check(results, name.str(), worst < 1e-12, worst, 1e-12);

        const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);
        const Eigen::MatrixXd dense = Eigen::MatrixXd(oracle);
        BlockVector           b     = random_block_vector(op, rng);
        for (int a = 0; a <= k; ++a)
          vs.zero_constrained(b.velocity(a));
        BlockVector swept = op.make_vector();
        smoother.apply_additive(b, swept);
        Eigen::VectorXd ref = Eigen::VectorXd::Zero(b.size());
        for (const auto &patch : smoother.patches())
          {
            const int       n_t = patch.size();
            Eigen::MatrixXd local(n_t, n_t);
            Eigen::VectorXd rloc(n_t);
            for (int i = 0; i < n_t; ++i)
              {
                rloc(i) = b.flat()(patch.dofs[i]);
                for (int j = 0; j < n_t; ++j)
                  local(i, j) = dense(patch.dofs[i], patch.dofs[j]);
              }
            const Eigen::VectorXd sol = local.partialPivLu().solve(rloc);
            for (int i = 0; i < n_t; ++i)
              ref(patch.dofs[i]) += patch.weights(i) * sol(i);
          }
        const double verr = (swept.flat() - ref).norm() / ref.norm();
        std::ostringstream vname;
        vname << "vanka sweep vs dense oracle (r=" << r << ", k=" << k << ")";
        add_check(results, vname.str(), verr < 1e-12, verr, 1e-12);
      }

  // Transfer identities: restriction is the exact transpose, prolongation
  // reproduces coarse functions, the pressure mean is preserved.
  {
    const VelocitySpace vc(mesh, 1, 1), vf(mesh, 2, 1);
    const PressureSpace pc(mesh, 1, 1), pf(mesh, 2, 1);
    const TransferPair  t = build_h_space_transfer(vc, pc, vf, pf, 1);

    BlockVector xc(2, vc.n_dofs(), pc.n_dofs());
    BlockVector yf(2, vf.n_dofs(), pf.n_dofs());
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < xc.size(); ++i)
      xc.flat()(i) = dist(rng);
    for (Eigen::Index i = 0; i < yf.size(); ++i)
      yf.flat()(i) = dist(rng);
    const double lhs = t.prolongate(xc).dot(yf);
    const double rhs = xc.dot(t.restrict_(yf));
    const double aerr = std::abs(lhs - rhs) / std::abs(lhs);
    add_check(results, "transfer adjoint <Px,y>=<x,P^T y>", aerr < 1e-12, aerr,
              1e-12);

    double worst = 0.0;
    const BlockVector xf = t.prolongate(xc);
    for (int trial = 0; trial < 50; ++trial)
      {
        const double x = 0.5 * (dist(rng) + 1.0);
        const double y = 0.5 * (dist(rng) + 1.0);
        const double coarse_val =
          evaluate_velocity(vc, xc.velocity(0), x, y, 0);
        const double fine_val = evaluate_velocity(vf, xf.velocity(0), x, y, 0);
        worst = std::max(worst, std::abs(coarse_val - fine_val));
        const double pcv = evaluate_pressure(pc, xc.pressure(0), x, y);
        const double pfv = evaluate_pressure(pf, xf.pressure(0), x, y);
        worst = std::max(worst, std::abs(pcv - pfv));
      }
    add_check(results, "prolongation exact on coarse space", worst < 1e-12,
              worst, 1e-12);

    const double mean_c = pc.mean_vector().dot(xc.pressure(0));
    const double mean_f = pf.mean_vector().dot(xf.pressure(0));
    const double merr   = std::abs(mean_c - mean_f);
    add_check(results, "pressure mean preserved by prolongation", merr < 1e-13,
              merr, 1e-13);
  }

  // Hierarchy generation: 4 levels with spatial p-coarsening on top, then
  // geometric steps, temporal p-coarsening at the bottom.
  {
    const auto spatial  = construct_hierarchy(0.125, 0.5, 2, 1);
    const auto temporal = construct_hierarchy(0.1, 0.1, 2, 1);
    const auto levels   = combine_hierarchies(spatial, temporal);
    const bool ok =
      levels.size() == 4 && levels[0].h == 0.5 && levels[0].r == 1 &&
      levels[0].k == 1 && levels[1].h == 0.25 && levels[1].r == 1 &&
      levels[1].k == 2 && levels[2].h == 0.125 && levels[2].r == 1 &&
      levels[2].k == 2 && levels[3].h == 0.125 && levels[3].r == 2 &&
      levels[3].k == 2 &&
      levels[1].kind_to_coarser == TransferKind::h_space_p_time &&
      levels[2].kind_to_coarser == TransferKind::h_space &&
      levels[3].kind_to_coarser == TransferKind::p_space;
    results.push_back(CheckResult{"hierarchy example (4 levels)", ok,
                                  ok ? "reproduced" : "mismatch"});
  }

  // V-cycle linearity (zero initial guess).
  {
    const StokesProblem problem = manufactured_problem();
    RunConfig           config;
    config.r           = 1;
    config.refinements = 2;
    Setup        setup = build_setup(problem, config);
    const VCycle vcycle(setup.levels, config.mg);
    const SpaceTimeBlockOperator &op = *setup.levels.finest().op;

    BlockVector a = random_block_vector(op, rng);
    BlockVector b = random_block_vector(op, rng);
    const auto &vs = *setup.levels.finest().vspace;
    for (int slot = 0; slot < a.n_slots(); ++slot)
      {
        vs.zero_constrained(a.velocity(slot));
        vs.zero_constrained(b.velocity(slot));
      }
    BlockVector ab = a;
    ab *= 0.3;
    {
      BlockVector tmp = b;
      tmp *= -1.7;
      ab += tmp;
    }
    BlockVector lhs = vcycle.apply(ab);
    BlockVector va  = vcycle.apply(a);
    BlockVector vb  = vcycle.apply(b);
    va *= 0.3;
    vb *= -1.7;
    va += vb;
    const double lerr = (lhs.flat() - va.flat()).norm() / va.flat().norm();
    add_check(results, "v_cycle linearity", lerr < 1e-12, lerr, 1e-12);
  }

  return results;
}

} // namespace stmg
