// Acceptance suite: runs every gate at its stated tolerance and prints one
// pass/fail line per criterion. Exit code 0 iff all gates hold.

#include "stmg/harness.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace stmg;

namespace
{

struct Criterion
{
  int         number;
  std::string name;
  bool        passed = true;
  std::string detail;
};

std::vector<Criterion> results;

void
record(int number, const std::string &name, bool passed, const std::string &detail)
{
  results.push_back(Criterion{number, name, passed, detail});
  std::printf("[%s] criterion %d: %s — %s\n", passed ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string
fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ------------------------------------------------------------------ 1
void
criterion_1_quadrature()
{
  double worst_moment = 0.0;
  for (int n = 1; n <= 6; ++n)
    {
      const QuadratureRule rule = gauss_radau_right(n);
      for (int d = 0; d <= 2 * n - 2; ++d)
        {
          double integral = 0.0;
          for (int q = 0; q < n; ++q)
            integral += rule.weights(q) * std::pow(rule.points(q), d);
          const double exact = d % 2 == 0 ? 2.0 / (d + 1) : 0.0;
          worst_moment = std::max(worst_moment, std::abs(integral - exact));
        }
    }
  const QuadratureRule r2 = gauss_radau_right(2);
  const double node_err = std::max(std::abs(r2.points(0) + 1.0 / 3.0),
                                   std::abs(r2.points(1) - 1.0));
  const double weight_err = std::max(std::abs(r2.weights(0) - 1.5),
                                     std::abs(r2.weights(1) - 0.5));
  const bool ok = worst_moment < 1e-13 && node_err < 1e-14 && weight_err < 1e-14;
  record(1, "Gauss-Radau quadrature and nodes", ok,
         "max moment error " + fmt(worst_moment) + ", Radau-2 node/weight error " +
           fmt(std::max(node_err, weight_err)));
}

// ------------------------------------------------------------------ 2
double
radau_iia_stability(int s, double z)
{
  const int  m = s - 1, n = s;
  const auto factorial = [](int v) {
    double f = 1.0;
    for (int i = 2; i <= v; ++i)
      f *= i;
    return f;
  };
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= m; ++j)
    num += factorial(m) * factorial(m + n - j) /
           (factorial(m + n) * factorial(j) * factorial(m - j)) * std::pow(z, j);
  for (int j = 0; j <= n; ++j)
    den += factorial(n) * factorial(m + n - j) /
           (factorial(m + n) * factorial(j) * factorial(n - j)) * std::pow(-z, j);
  return num / den;
}

void
criterion_2_dg_radau()
{
  double worst = 0.0;
  for (int k = 0; k <= 3; ++k)
    for (const double z : {-0.1, -1.0, -4.0})
      {
        const double dg = dg_ode_step(k, 1.0, z, 1.0);
        const double rk = radau_iia_stability(k + 1, z);
        worst = std::max(worst, std::abs(dg - rk));
      }
  record(2, "DG(k) endpoint equals Radau IIA", worst < 1e-12,
         "max deviation " + fmt(worst));
}

// ------------------------------------------------------------------ 3
void
criterion_3_matrix_free()
{
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Mesh mesh = Mesh::build_cartesian(Box{0, 0, 1, 1}, 1, 1, 3);

  double      worst = 0.0;
  std::string worst_case;
  const auto  note = [&](double err, const std::string &what) {
    if (err > worst)
      {
        worst      = err;
        worst_case = what;
      }
  };

  for (const int level : {1, 2}) // 2x2 and 4x4 meshes
    for (const int r : {1, 2, 3})
      for (const int k : {1, 2})
        {
          const VelocitySpace    vs(mesh, level, r);
          const PressureSpace    ps(mesh, level, r);
          const TemporalMatrices tm = temporal_matrices(k, 0.25);
          // both the plain form and the grad-div stabilized production form
          const SpaceTimeBlockOperator op(vs, ps, tm, 0.1, level == 1 ? 0.0 : 1.0);
          const Eigen::SparseMatrix<double> oracle = op.assemble_sparse_oracle();
          const std::string tag = " (mesh " + std::to_string(1 << level) + ", r=" +
                                  std::to_string(r) + ", k=" + std::to_string(k) + ")";

          // individual spatial operators against dense blocks of the oracle
          // are covered by the block test below through k=0-style
          // combinations; check them directly via small dense assemblies.
          for (int trial = 0; trial < 10; ++trial)
            {
              BlockVector x = op.make_vector();
              for (Eigen::Index i = 0; i < x.size(); ++i)
                x.flat()(i) = dist(rng);
              BlockVector y = op.make_vector();
              op.apply_block(x, y);
              const Eigen::VectorXd ref = oracle * x.flat();
              note((y.flat() - ref).norm() / ref.norm(), "D" + tag);
            }

          // adjoint pair and pressure mass
          Eigen::VectorXd v(vs.n_dofs()), q(ps.n_dofs());
          for (int i = 0; i < v.size(); ++i)
            v(i) = dist(rng);
          for (int i = 0; i < q.size(); ++i)
            q(i) = dist(rng);
          Eigen::VectorXd bv(ps.n_dofs()), btq(vs.n_dofs());
          op.apply_div(v, bv);
          op.apply_div_transpose(q, btq);
          note(std::abs(bv.dot(q) - v.dot(btq)) /
                 (std::abs(bv.dot(q)) + 1e-300),
               "B/B^T adjoint" + tag);

          // coupling against the dense Kronecker form
          Eigen::VectorXd vp(vs.n_dofs());
          for (int i = 0; i < vp.size(); ++i)
            vp(i) = dist(rng);
          const BlockVector cpl = op.coupling_rhs(vp);
          Eigen::VectorXd   mv(vs.n_dofs());
          op.apply_velocity_mass(vp, mv);
          for (int a = 0; a <= k; ++a)
            note((cpl.velocity(a) - tm.left_values(a) * mv).norm() / mv.norm(),
                 "C^n" + tag);

          // additive Vanka sweep against the dense oracle
          const VankaSmoother smoother = VankaSmoother::build(op, SmootherKind::cell);
          const Eigen::MatrixXd dense = Eigen::MatrixXd(oracle);
          BlockVector           b     = op.make_vector();
          for (Eigen::Index i = 0; i < b.size(); ++i)
            b.flat()(i) = dist(rng);
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
          note((swept.flat() - ref).norm() / ref.norm(), "Vanka sweep" + tag);
        }

  // V-cycle as a linear operator: dense column extraction on a two-level
  // problem, then 10 random matches.
  {
    const StokesProblem problem = manufactured_problem();
    RunConfig           config;
    config.r           = 1;
    config.refinements = 1;
    Setup        setup = build_setup(problem, config);
    const VCycle vcycle(setup.levels, config.mg);
    const SpaceTimeBlockOperator &op = *setup.levels.finest().op;
    const VelocitySpace &         vs = *setup.levels.finest().vspace;

    const Eigen::Index n = op.make_vector().size();
    Eigen::MatrixXd    cmat(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      {
        BlockVector e = op.make_vector();
        e.flat()(j)   = 1.0;
        for (int a = 0; a < e.n_slots(); ++a)
          vs.zero_constrained(e.velocity(a));
        cmat.col(j) = vcycle.apply(e).flat();
      }
    for (int trial = 0; trial < 10; ++trial)
      {
        BlockVector b = op.make_vector();
        for (Eigen::Index i = 0; i < b.size(); ++i)
          b.flat()(i) = dist(rng);
        for (int a = 0; a < b.n_slots(); ++a)
          vs.zero_constrained(b.velocity(a));
        const BlockVector x = vcycle.apply(b);
        const Eigen::VectorXd ref = cmat * b.flat();
        note((x.flat() - ref).norm() / (ref.norm() + 1e-300), "V-cycle linearity");
      }
  }

  record(3, "matrix-free / oracle equivalence", worst < 1e-12,
         "max relative deviation " + fmt(worst) +
           (worst_case.empty() ? "" : " in " + worst_case));
}

// ------------------------------------------------------------------ 4
void
criterion_4_transfers()
{
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Mesh mesh = Mesh::build_cartesian(Box{0, 0, 1, 1}, 1, 1, 3);

  bool   ok = true;
  double worst_transpose = 0.0, worst_exact = 0.0, worst_mean = 0.0;

  const VelocitySpace vc(mesh, 1, 2), vf(mesh, 2, 2);
  const PressureSpace pc(mesh, 1, 2), pf(mesh, 2, 2);
  const VelocitySpace vlow(mesh, 1, 1);
  const PressureSpace plow(mesh, 1, 1);

  const std::vector<TransferPair> pairs = {
    build_h_space_transfer(vc, pc, vf, pf, 1),
    build_p_space_transfer(vlow, plow, vc, pc, 1),
  };
  for (const TransferPair &t : pairs)
    {
      const VelocitySpace &src_v = t.kind() == TransferKind::h_space ? vc : vlow;
      const PressureSpace &src_p = t.kind() == TransferKind::h_space ? pc : plow;
      const VelocitySpace &dst_v = t.kind() == TransferKind::h_space ? vf : vc;
      const PressureSpace &dst_p = t.kind() == TransferKind::h_space ? pf : pc;

      // R = P^T entrywise on the assembled matrices
      Eigen::MatrixXd pmat(dst_v.n_scalar_dofs(), src_v.n_scalar_dofs());
      pmat = Eigen::MatrixXd(t.velocity_matrix());
      Eigen::MatrixXd pp = Eigen::MatrixXd(t.pressure_matrix());
      // restriction applies the transpose of the same stored matrix, so the
      // identity is structural; verify through the action instead.
      BlockVector xc(2, src_v.n_dofs(), src_p.n_dofs());
      BlockVector yf(2, dst_v.n_dofs(), dst_p.n_dofs());
      for (Eigen::Index i = 0; i < xc.size(); ++i)
        xc.flat()(i) = dist(rng);
      for (Eigen::Index i = 0; i < yf.size(); ++i)
        yf.flat()(i) = dist(rng);
      const double lhs = t.prolongate(xc).dot(yf);
      const double rhs = xc.dot(t.restrict_(yf));
      worst_transpose =
        std::max(worst_transpose, std::abs(lhs - rhs) / std::abs(lhs));

      // prolongation exactness at 50 random points
      const BlockVector xf = t.prolongate(xc);
      for (int trial = 0; trial < 50; ++trial)
        {
          const double x = 0.5 * (dist(rng) + 1.0);
          const double y = 0.5 * (dist(rng) + 1.0);
          worst_exact = std::max(
            worst_exact,
            std::abs(evaluate_velocity(dst_v, xf.velocity(0), x, y, 0) -
                     evaluate_velocity(src_v, xc.velocity(0), x, y, 0)));
          worst_exact = std::max(
            worst_exact, std::abs(evaluate_pressure(dst_p, xf.pressure(1), x, y) -
                                  evaluate_pressure(src_p, xc.pressure(1), x, y)));
        }

      // mean preservation
      for (int a = 0; a < 2; ++a)
        worst_mean = std::max(worst_mean,
                              std::abs(dst_p.mean_vector().dot(xf.pressure(a)) -
                                       src_p.mean_vector().dot(xc.pressure(a))));
    }
  ok = worst_transpose < 1e-12 && worst_exact < 1e-12 && worst_mean < 1e-13;

  // hierarchy generation: the expected 4-level merged sequence
  const auto spatial  = construct_hierarchy(0.125, 0.5, 2, 1);
  const auto temporal = construct_hierarchy(0.1, 0.1, 2, 1);
  const auto levels   = combine_hierarchies(spatial, temporal);
  const bool table_ok =
    levels.size() == 4 && levels[0].h == 0.5 && levels[0].r == 1 &&
    levels[0].k == 1 && levels[1].h == 0.25 && levels[1].r == 1 &&
    levels[1].k == 2 && levels[2].h == 0.125 && levels[2].r == 1 &&
    levels[2].k == 2 && levels[3].h == 0.125 && levels[3].r == 2 &&
    levels[3].k == 2;
  ok = ok && table_ok;

  record(4, "transfer calculus and hierarchy table", ok,
         "adjoint " + fmt(worst_transpose) + ", exactness " + fmt(worst_exact) +
           ", mean " + fmt(worst_mean) +
           (table_ok ? ", 4-level table reproduced" : ", table MISMATCH"));
}

// ------------------------------------------------------------------ 5, 6, 9
struct StudyData
{
  std::map<std::pair<int, int>, ConvergenceRow> rows; // (r, c) -> row
  double worst_divergence   = 0.0;                    // relative to 10*rtol
  double worst_pressure_mean = 0.0;
  double rtol               = 0.0;
};

StudyData
run_study(const std::vector<int> &r_list,
          const std::vector<int> &c_list,
          double                  rtol)
{
  const StokesProblem problem = manufactured_problem();
  StudyData           data;
  data.rtol = rtol;
  for (const int r : r_list)
    for (const int c : c_list)
      {
        RunConfig config;
        config.r           = r;
        config.refinements = c;
        config.krylov.rtol = rtol;
        config.krylov.max_iterations = 400;
        config.krylov.max_basis      = 400;

        Setup setup = build_setup(problem, config);
        const TimeMarchResult march =
          time_march(setup.levels, problem.data, step_count(problem, config),
                     config.mg, config.krylov);

        ConvergenceRow row;
        row.r              = r;
        row.c              = c;
        row.h              = std::pow(0.5, c);
        row.errors         = compute_errors(setup, march, problem.exact);
        row.avg_iterations = march.avg_iterations;
        data.rows[{r, c}]  = row;

        for (const auto &s : march.steps)
          {
            data.worst_divergence =
              std::max(data.worst_divergence, s.max_divergence);
            data.worst_pressure_mean =
              std::max(data.worst_pressure_mean, s.max_pressure_mean);
          }
        std::printf("  [study] r=%d c=%d: e_v=%.4g e_p=%.4g e_H1=%.4g e_div=%.4g"
                    " iters=%.1f\n",
                    r, c, row.errors.e_v_l2, row.errors.e_p_l2,
                    row.errors.e_v_h1, row.errors.e_div, row.avg_iterations);
        std::fflush(stdout);
      }
  return data;
}

void
criterion_5_convergence(const StudyData &high, const StudyData &low)
{
  bool        ok = true;
  std::string detail;

  // (a) r = 4: values within factor 2 of the reference table, EOC +-0.3
  const double ref_v[3]   = {1.00279e-04, 2.32706e-06, 3.98114e-08};
  const double ref_p[3]   = {1.14907e-03, 1.11534e-04, 3.58645e-06};
  const double ref_eoc[2] = {5.43, 5.87};
  for (int c = 1; c <= 3; ++c)
    {
      const ConvergenceRow &row = high.rows.at({4, c});
      const double          fv  = row.errors.e_v_l2 / ref_v[c - 1];
      const double          fp  = row.errors.e_p_l2 / ref_p[c - 1];
      if (!(fv > 0.5 && fv < 2.0 && fp > 0.5 && fp < 2.0))
        {
          ok = false;
          detail += " r4c" + std::to_string(c) + " value off (factor v " +
                    fmt(fv) + ", p " + fmt(fp) + ");";
        }
    }
  for (int c = 2; c <= 3; ++c)
    {
      const double e_coarse = high.rows.at({4, c - 1}).errors.e_v_l2;
      const double e_fine   = high.rows.at({4, c}).errors.e_v_l2;
      const double observed = eoc(e_coarse, e_fine);
      if (std::abs(observed - ref_eoc[c - 2]) > 0.3)
        {
          ok = false;
          detail += " r4 eoc@c" + std::to_string(c) + " " + fmt(observed) + ";";
        }
    }

  // (b) r in {1,2,3}: EOC gates between the finest unsaturated pair
  for (const int r : {1, 2, 3})
    {
      const int    c0 = 3, c1 = 4; // finest pair of c in {1..4}
      const auto & coarse = low.rows.at({r, c0});
      const auto & fine   = low.rows.at({r, c1});
      const double sat    = 10.0 * low.rtol; // errors near rtol are excluded
      if (fine.errors.e_v_l2 > sat)
        {
          const double ev = eoc(coarse.errors.e_v_l2, fine.errors.e_v_l2);
          if (!(ev >= r + 1.5))
            {
              ok = false;
              detail += " r" + std::to_string(r) + " v-eoc " + fmt(ev) + ";";
            }
        }
      if (fine.errors.e_v_h1 > sat)
        {
          const double eh = eoc(coarse.errors.e_v_h1, fine.errors.e_v_h1);
          if (!(eh >= r + 0.7 && eh <= r + 1.3))
            {
              ok = false;
              detail += " r" + std::to_string(r) + " H1-eoc " + fmt(eh) + ";";
            }
        }
      if (fine.errors.e_p_l2 > sat)
        {
          const double ep = eoc(coarse.errors.e_p_l2, fine.errors.e_p_l2);
          if (!(ep >= r + 0.7 && ep <= r + 1.3))
            {
              ok = false;
              detail += " r" + std::to_string(r) + " p-eoc " + fmt(ep) + ";";
            }
        }
    }
  record(5, "manufactured-solution convergence", ok,
         ok ? "r=4 values within factor 2, all EOC gates hold" : detail);
}

void
criterion_6_h_robustness()
{
  // Separate sweep at the solver's default tolerance: the iteration gate is
  // a property of the preconditioned solver at its production setting.
  const StokesProblem problem = manufactured_problem();
  bool                ok = true;
  std::string         iters;
  double              prev = 1e300;
  for (int c = 1; c <= 4; ++c)
    {
      RunConfig config;
      config.r           = 2;
      config.refinements = c;

      Setup setup = build_setup(problem, config);
      const TimeMarchResult march =
        time_march(setup.levels, problem.data, step_count(problem, config),
                   config.mg, config.krylov, /*keep_trajectory=*/false);
      const double it = march.avg_iterations;
      iters += fmt(it) + (c < 4 ? ", " : "");
      if (!(it >= 8.0 && it <= 22.0))
        ok = false;
      if (it > prev + 2.0)
        ok = false;
      prev = it;
    }
  record(6, "h-robustness (r=2, c=1..4)", ok,
         "avg iterations at rtol 1e-8: " + iters);
}

void
criterion_9_saddle_point(const StudyData &a, const StudyData &b)
{
  const double div_gate = 10.0;
  const double worst_div =
    std::max(a.worst_divergence / a.rtol, b.worst_divergence / b.rtol);
  const double worst_mean =
    std::max(a.worst_pressure_mean, b.worst_pressure_mean);
  const bool ok = worst_div <= div_gate && worst_mean <= 1e-10;
  record(9, "discrete divergence and pressure mean", ok,
         "max |Bv|/(rtol |v|_M) = " + fmt(worst_div) +
           " (gate 10), max pressure mean " + fmt(worst_mean) + " (gate 1e-10)");
}

// ------------------------------------------------------------------ 7
void
criterion_7_hp_vs_h(const StudyData &high, const StudyData &low)
{
  const StokesProblem problem = manufactured_problem();
  bool                ok = true;
  std::string         detail;
  for (const auto &[r, c] : std::vector<std::pair<int, int>>{{3, 4}, {4, 3}})
    {
      RunConfig config;
      config.r           = r;
      config.refinements = c;
      config.h_only      = true;
      config.krylov.rtol           = 1e-10; // same tolerance as the hp study
      config.krylov.max_iterations = 400;
      config.krylov.max_basis      = 400;

      Setup setup = build_setup(problem, config);
      const TimeMarchResult march =
        time_march(setup.levels, problem.data, step_count(problem, config),
                   config.mg, config.krylov, /*keep_trajectory=*/false);
      const double hp_iters = (r == 3 ? low.rows.at({3, 4}) : high.rows.at({4, 3}))
                                .avg_iterations;
      detail += "r" + std::to_string(r) + "c" + std::to_string(c) + ": hp " +
                fmt(hp_iters) + " vs h-only " + fmt(march.avg_iterations) + "; ";
      if (!(hp_iters <= march.avg_iterations))
        ok = false;
    }
  record(7, "hp STMG vs spatial-h-only multigrid", ok, detail);
}

// ------------------------------------------------------------------ 8
void
criterion_8_smoothing_tradeoff()
{
  bool        ok = true;
  std::string detail;
  for (const int c : {3, 4})
    {
      double iters[2];
      for (const int n_sm : {1, 2})
        {
          RunConfig config;
          config.r      = 2;
          config.mg.nu1 = n_sm;
          config.mg.nu2 = n_sm;
          const CavityResult cavity = cavity_demo_2d(c, 2, config);
          iters[n_sm - 1]           = cavity.march.avg_iterations;
        }
      const double reduction = 1.0 - iters[1] / iters[0];
      detail += "c" + std::to_string(c) + ": " + fmt(iters[0]) + " -> " +
                fmt(iters[1]) + " (-" + fmt(100 * reduction) + "%); ";
      if (!(reduction >= 0.25))
        ok = false;
    }
  record(8, "smoothing-step trade-off on the cavity", ok, detail);
}

// ------------------------------------------------------------------ 10
void
criterion_10_throughput_smoke()
{
  const StokesProblem problem = manufactured_problem();
  RunConfig           config;
  config.r           = 2;
  config.refinements = 3;
  Setup setup = build_setup(problem, config);
  const TimeMarchResult march =
    time_march(setup.levels, problem.data, step_count(problem, config),
               config.mg, config.krylov, /*keep_trajectory=*/false);
  record(10, "throughput smoke benchmark (reported, not gated)", true,
         fmt(march.throughput) + " dofs/s over " +
           std::to_string(march.dofs_processed) + " dofs");
}

} // namespace

int
main()
{
  std::printf("== acceptance suite ==\n");

  criterion_1_quadrature();
  criterion_2_dg_radau();
  criterion_3_matrix_free();
  criterion_4_transfers();

  // Shared runs: the (r, c) study matrix feeds criteria 5, 6, 7, and 9.
  std::printf("running convergence studies (this is the long part)...\n");
  const StudyData high = run_study({4}, {1, 2, 3}, 1e-10);
  const StudyData low  = run_study({1, 2, 3}, {1, 2, 3, 4}, 1e-10);

  criterion_5_convergence(high, low);
  criterion_6_h_robustness();
  criterion_7_hp_vs_h(high, low);
  criterion_8_smoothing_tradeoff();
  criterion_9_saddle_point(high, low);
  criterion_10_throughput_smoke();

  int failures = 0;
  for (const auto &c : results)
    if (!c.passed)
      ++failures;
  std::printf("== %zu criteria, %d failed ==\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
