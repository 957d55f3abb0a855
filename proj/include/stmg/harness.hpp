#pragma once

#include "stmg/problems.hpp"

#include <memory>
#include <string>
#include <vector>

namespace stmg
{

/// Space-time error norms of one run against a closed-form solution.
struct ErrorReport
{
  double e_v_l2   = 0.0; // velocity, L2 in space and time
  double e_p_l2   = 0.0; // pressure, L2 in space and time
  double e_v_h1   = 0.0; // velocity gradient seminorm, L2 in time
  double e_div    = 0.0; // divergence, L2 in space and time
  double e_v_linf = 0.0; // velocity, max over sample points
};

/// Experimental order of convergence under mesh halving.
inline double
eoc(double error_coarse, double error_fine)
{
  return std::log2(error_coarse / error_fine);
}

/// Parameters of one solver run.
struct RunConfig
{
  int          r           = 2;
  int          k           = -1;  // -1: k = r
  int          refinements = 2;   // c: finest mesh has 2^c x 2^c cells
  int          n_steps     = 0;   // 0: tau = h/2
  double       nu          = 0.1;
  double       grad_div    = 1.0; // grad-div stabilization coefficient
  SmootherKind smoother    = SmootherKind::cell;
  bool         h_only      = false; // geometric-in-space hierarchy only
  bool         allow_large = false; // permit r > 5 or c > 5
  VCycleConfig mg;
  KrylovConfig krylov;

  int time_degree() const { return k < 0 ? r : k; }
};

/// Mesh + instantiated hierarchy of one run; keeps the mesh alive for the
/// spaces that reference it.
struct Setup
{
  std::unique_ptr<Mesh>        mesh;
  std::vector<LevelDescriptor> descriptors;
  LevelHierarchy               levels;
};

/// Level descriptors for the given configuration (no instantiation).
std::vector<LevelDescriptor> plan_hierarchy(const RunConfig &config, double t_end);

/// Build mesh, descriptor sequence, and level bundles for a problem.
Setup build_setup(const StokesProblem &problem, const RunConfig &config);

/// Number of time steps of a run (derived or configured).
int step_count(const StokesProblem &problem, const RunConfig &config);

/// Quadrature-based space-time norms of the discrete trajectory against the
/// exact solution; time integrals use a (k+2)-point Gauss rule per
/// subinterval, space a (r+3)-point Gauss rule per direction.
ErrorReport compute_errors(const Setup &          setup,
                           const TimeMarchResult &march,
                           const ExactSolution &  exact);

/// Interpolate the exact solution into the trajectory slots (each Radau
/// node); used for interpolation-error baselines.
TimeMarchResult interpolate_exact(const Setup &setup, const ExactSolution &exact,
                                  int n_steps);

struct ConvergenceRow
{
  int         r, c;
  double      h;
  ErrorReport errors;
  double      eoc_v = 0.0, eoc_p = 0.0, eoc_h1 = 0.0, eoc_div = 0.0;
  double      avg_iterations = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const std::vector<int> &r_list,
                                              const std::vector<int> &c_list,
                                              const RunConfig &       base);

struct RobustnessRow
{
  int           r, c;
  std::string   smoother;
  int           n_sm;
  double        avg_iterations;
  std::uint64_t sum_nt2;
  double        throughput;
};

/// Iteration-robustness sweep on the manufactured problem.
std::vector<RobustnessRow> robustness_sweep(const std::vector<int> &r_list,
                                            const std::vector<int> &c_list,
                                            const std::vector<SmootherKind> &kinds,
                                            const std::vector<int> &n_sm_list,
                                            const RunConfig &        base);

struct CavitySample
{
  double t;
  double p_probe1;
  double p_probe2;
  double p_diff;
  bool   valid; // false where the normalization denominator vanishes
};

struct CavityResult
{
  std::vector<CavitySample> trace;
  TimeMarchResult           march;
};

/// 2D lid-driven cavity with the normalized pressure difference between the
/// probes (0.875, 0.125) and (0.875, 0.875), sampled at step endpoints.
CavityResult cavity_demo_2d(int c, int r, const RunConfig &base);

/// Evaluate the discrete pressure at a point.
double evaluate_pressure(const PressureSpace &                    space,
                         const Eigen::Ref<const Eigen::VectorXd> &coeffs,
                         double                                   x,
                         double                                   y);

/// Evaluate a discrete velocity component at a point.
double evaluate_velocity(const VelocitySpace &                    space,
                         const Eigen::Ref<const Eigen::VectorXd> &coeffs,
                         double x, double y, int comp);

// CSV writers for the study outputs.
void write_convergence_csv(const std::string &path,
                           const std::vector<ConvergenceRow> &rows);
void write_robustness_csv(const std::string &path,
                          const std::vector<RobustnessRow> &rows);
void write_cavity_csv(const std::string &path, const CavityResult &result);
void write_steps_csv(const std::string &path, const TimeMarchResult &march);

/// Per-level smoother statistics of an instantiated hierarchy.
struct SmootherLevelStats
{
  int           level;
  int           r, k;
  double        h;
  std::size_t   patch_count;
  int           block_min, block_max;
  std::uint64_t sum_nt2;
  std::uint64_t nominal_block; // (k+1)(d(r+2)^d + (r+1)^d), for comparison
};

std::vector<SmootherLevelStats> smoother_stats(const Setup &setup);
void print_smoother_stats(const std::vector<SmootherLevelStats> &stats);

struct CheckResult
{
  std::string name;
  bool        passed;
  std::string detail;
};

/// Oracle-equivalence suite: matrix-free operators, transfers, smoother and
/// V-cycle against their assembled counterparts on small meshes.
std::vector<CheckResult> run_selftest();

} // namespace stmg
