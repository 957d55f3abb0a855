#include "stmg/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace
{

// Flat INI: "[section]" lines scope the following "key = value" pairs to
// "section.key"; '#' and ';' start comments.
std::map<std::string, std::string>
read_flat_ini(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> values;
  std::string                        line, section;
  const auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    const auto end   = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() :
                                        s.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line))
    {
      const auto comment = line.find_first_of("#;");
      if (comment != std::string::npos)
        line.erase(comment);
      line = trim(line);
      if (line.empty())
        continue;
      if (line.front() == '[' && line.back() == ']')
        {
          section = trim(line.substr(1, line.size() - 2));
          continue;
        }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config: expected key = value, got: " + line);
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      values[section.empty() ? key : section + "." + key] = val;
    }
  return values;
}

std::vector<int>
parse_int_list(const std::string &text)
{
  std::vector<int> out;
  std::string      token;
  std::stringstream stream(text);
  while (std::getline(stream, token, ','))
    {
      std::stringstream item(token);
      int               v;
      while (item >> v)
        out.push_back(v);
    }
  return out;
}

struct CliOptions
{
  stmg::RunConfig  base;
  std::string      smoother = "cell";
  std::string      mode     = "hp";
  std::string      csv_path;
  std::string      steps_csv_path;
  bool             show_stats = false;
  std::vector<int> r_list{2};
  std::vector<int> c_list{1, 2, 3};
  std::vector<int> n_sm_list{1};
};

void
add_common_options(CLI::App *cmd, CliOptions &opts)
{
  cmd->add_option("--problem.nu", opts.base.nu, "kinematic viscosity");
  cmd->add_option("--problem.grad_div", opts.base.grad_div,
                  "grad-div stabilization coefficient");
  cmd->add_option("--problem.N", opts.base.n_steps,
                  "number of time steps (0: derived from the refinement)");
  cmd->add_option("--discretization.r", opts.base.r, "spatial degree r");
  cmd->add_option("--discretization.k", opts.base.k,
                  "temporal degree k (-1: k = r)");
  cmd->add_option("--mesh.refinements", opts.base.refinements,
                  "global refinements c");
  cmd->add_option("--mg.nu1", opts.base.mg.nu1, "pre-smoothing steps");
  cmd->add_option("--mg.nu2", opts.base.mg.nu2, "post-smoothing steps");
  cmd->add_option("--mg.omega", opts.base.mg.omega, "Vanka relaxation");
  cmd->add_option("--mg.smoother", opts.smoother, "cell | vertex_star");
  cmd->add_option("--mg.mode", opts.mode, "hp | h_only");
  cmd->add_option("--mg.coarse_cap", opts.base.mg.coarse_dof_cap,
                  "coarse direct-solve dof cap");
  cmd->add_flag("--mg.project_pressure,!--mg.no-project_pressure",
                opts.base.mg.project_pressure,
                "project the pressure mean inside the cycle");
  cmd->add_flag("--allow_large", opts.base.allow_large,
                "permit runs beyond r = 5 or c = 5 refinements");
  cmd->add_option("--gmres.rtol", opts.base.krylov.rtol, "relative tolerance");
  cmd->add_option("--gmres.atol", opts.base.krylov.atol, "absolute tolerance");
  cmd->add_option("--gmres.maxit", opts.base.krylov.max_iterations,
                  "max GMRES iterations");
  cmd->add_option("--output.csv_path", opts.csv_path, "CSV output file");
  cmd->add_option("--output.steps_csv", opts.steps_csv_path,
                  "per-step CSV (step, iterations, residual, seconds)");
  cmd->add_flag("--report.smoother_stats", opts.show_stats,
                "print per-level smoother statistics");
}

// Config keys address the same settings as the CLI flags one-for-one;
// command-line flags win when both are given.
void
apply_config(CliOptions &                              opts,
             const std::map<std::string, std::string> &values,
             const CLI::App &                          app)
{
  using Setter = std::function<void(const std::string &)>;
  const auto to_int    = [](const std::string &v) { return std::stoi(v); };
  const auto to_double = [](const std::string &v) { return std::stod(v); };
  const auto to_bool   = [](const std::string &v) {
    return v == "1" || v == "true" || v == "on" || v == "yes";
  };

  const std::map<std::string, Setter> setters = {
    {"problem.nu", [&](const std::string &v) { opts.base.nu = to_double(v); }},
    {"problem.grad_div",
     [&](const std::string &v) { opts.base.grad_div = to_double(v); }},
    {"problem.N", [&](const std::string &v) { opts.base.n_steps = to_int(v); }},
    {"discretization.r", [&](const std::string &v) { opts.base.r = to_int(v); }},
    {"discretization.k", [&](const std::string &v) { opts.base.k = to_int(v); }},
    {"mesh.refinements",
     [&](const std::string &v) { opts.base.refinements = to_int(v); }},
    {"mg.nu1", [&](const std::string &v) { opts.base.mg.nu1 = to_int(v); }},
    {"mg.nu2", [&](const std::string &v) { opts.base.mg.nu2 = to_int(v); }},
    {"mg.omega", [&](const std::string &v) { opts.base.mg.omega = to_double(v); }},
    {"mg.smoother", [&](const std::string &v) { opts.smoother = v; }},
    {"mg.mode", [&](const std::string &v) { opts.mode = v; }},
    {"mg.coarse_cap",
     [&](const std::string &v) { opts.base.mg.coarse_dof_cap = to_int(v); }},
    {"mg.project_pressure",
     [&](const std::string &v) { opts.base.mg.project_pressure = to_bool(v); }},
    {"gmres.rtol", [&](const std::string &v) { opts.base.krylov.rtol = to_double(v); }},
    {"gmres.atol", [&](const std::string &v) { opts.base.krylov.atol = to_double(v); }},
    {"gmres.maxit",
     [&](const std::string &v) { opts.base.krylov.max_iterations = to_int(v); }},
    {"output.csv_path", [&](const std::string &v) { opts.csv_path = v; }},
    {"output.steps_csv", [&](const std::string &v) { opts.steps_csv_path = v; }},
    {"r_list", [&](const std::string &v) { opts.r_list = parse_int_list(v); }},
    {"c_list", [&](const std::string &v) { opts.c_list = parse_int_list(v); }},
    {"n_sm_list",
     [&](const std::string &v) { opts.n_sm_list = parse_int_list(v); }},
  };

  for (const auto &[key, value] : values)
    {
      const auto it = setters.find(key);
      if (it == setters.end())
        throw std::runtime_error("config: unknown key '" + key + "'");
      // a flag given on the command line overrides the config value
      const CLI::Option *opt = app.get_option_no_throw("--" + key);
      if (opt == nullptr)
        for (const CLI::App *sub : app.get_subcommands())
          if ((opt = sub->get_option_no_throw("--" + key)) != nullptr)
            break;
      if (opt != nullptr && opt->count() > 0)
        continue;
      it->second(value);
    }
}

void
finalize(CliOptions &opts)
{
  opts.base.smoother = opts.smoother == "vertex_star" ?
                         stmg::SmootherKind::vertex_star :
                         stmg::SmootherKind::cell;
  opts.base.h_only = opts.mode == "h_only";
}

void
print_hierarchy(const std::vector<stmg::LevelDescriptor> &levels)
{
  std::printf("level |   h      r  |  tau     k  | transfer to coarser\n");
  std::printf("------+-------------+-------------+--------------------\n");
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    std::printf("%5d | %-8.4g %2d | %-8.4g %2d | %s\n", it->index, it->h, it->r,
                it->tau, it->k,
                it->index == 0 ? "(direct solve)" :
                                 stmg::to_string(it->kind_to_coarser).c_str());
}

} // namespace

int
main(int argc, char **argv)
{
  CLI::App app{"hp space-time multigrid Stokes solver"};
  app.require_subcommand(1);
  app.fallthrough(); // common options may follow the subcommand name

  CliOptions  opts;
  std::string config_path;
  app.add_option("--config", config_path, "configuration file (flat INI sections)");
  add_common_options(&app, opts);

  auto *conv = app.add_subcommand("convergence",
                                  "manufactured-solution convergence study");
  conv->add_option("--r_list", opts.r_list, "spatial degrees");
  conv->add_option("--c_list", opts.c_list, "refinement counts");

  auto *robust = app.add_subcommand("robustness", "iteration-robustness sweep");
  robust->add_option("--r_list", opts.r_list, "spatial degrees");
  robust->add_option("--c_list", opts.c_list, "refinement counts");
  robust->add_option("--n_sm_list", opts.n_sm_list, "smoothing step counts");

  auto *cavity = app.add_subcommand("cavity", "2D lid-driven cavity demo");

  auto *hier = app.add_subcommand("hierarchy", "print the multigrid hierarchy");

  auto *self = app.add_subcommand("selftest", "run the oracle-equivalence suite");
  (void)cavity;
  (void)hier;
  (void)self;

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::ParseError &e)
    {
      return app.exit(e);
    }

  if (!config_path.empty())
    {
      try
        {
          apply_config(opts, read_flat_ini(config_path), app);
        }
      catch (const std::exception &e)
        {
          std::fprintf(stderr, "%s\n", e.what());
          return 3; // missing/unreadable config or bad keys
        }
    }

  finalize(opts);

  try
    {
      if (conv->parsed())
        {
          const auto rows =
            stmg::convergence_study(opts.r_list, opts.c_list, opts.base);
          std::printf("%2s %2s %-10s %-12s %-6s %-12s %-6s %-12s %-6s %-12s %-6s %s\n",
                      "r", "c", "h", "e_v_L2", "eoc", "e_p_L2", "eoc", "e_v_H1",
                      "eoc", "e_div", "eoc", "iters");
          for (const auto &row : rows)
            std::printf(
              "%2d %2d %-10.4g %-12.5g %-6.2f %-12.5g %-6.2f %-12.5g %-6.2f %-12.5g %-6.2f %.1f\n",
              row.r, row.c, row.h, row.errors.e_v_l2, row.eoc_v,
              row.errors.e_p_l2, row.eoc_p, row.errors.e_v_h1, row.eoc_h1,
              row.errors.e_div, row.eoc_div, row.avg_iterations);
          if (!opts.csv_path.empty())
            stmg::write_convergence_csv(opts.csv_path, rows);
        }
      else if (robust->parsed())
        {
          const std::vector<stmg::SmootherKind> kinds{opts.base.smoother};
          const auto rows = stmg::robustness_sweep(opts.r_list, opts.c_list,
                                                   kinds, opts.n_sm_list,
                                                   opts.base);
          std::printf("%2s %2s %-12s %4s %-10s %-14s %-12s\n", "r", "c",
                      "smoother", "n_sm", "avg_iters", "sum_nT2",
                      "throughput");
          for (const auto &row : rows)
            std::printf("%2d %2d %-12s %4d %-10.2f %-14llu %-12.4g\n", row.r,
                        row.c, row.smoother.c_str(), row.n_sm,
                        row.avg_iterations,
                        static_cast<unsigned long long>(row.sum_nt2),
                        row.throughput);
          if (!opts.csv_path.empty())
            stmg::write_robustness_csv(opts.csv_path, rows);
        }
      else if (cavity->parsed())
        {
          const auto result = stmg::cavity_demo_2d(opts.base.refinements,
                                                   opts.base.r, opts.base);
          std::printf("t        p(0.875,0.125)  p(0.875,0.875)  p_diff\n");
          for (const auto &s : result.trace)
            {
              if (s.valid)
                std::printf("%-8.4g %-15.6g %-15.6g %-10.6g\n", s.t, s.p_probe1,
                            s.p_probe2, s.p_diff);
              else
                std::printf("%-8.4g %-15.6g %-15.6g (skipped)\n", s.t,
                            s.p_probe1, s.p_probe2);
            }
          std::printf("avg GMRES iterations: %.2f, throughput %.4g dofs/s\n",
                      result.march.avg_iterations, result.march.throughput);
          if (!opts.csv_path.empty())
            stmg::write_cavity_csv(opts.csv_path, result);
          if (!opts.steps_csv_path.empty())
            stmg::write_steps_csv(opts.steps_csv_path, result.march);
          if (opts.show_stats)
            {
              const stmg::Setup setup = stmg::build_setup(
                stmg::cavity_problem(opts.base.nu), opts.base);
              stmg::print_smoother_stats(stmg::smoother_stats(setup));
            }
        }
      else if (hier->parsed())
        {
          const auto levels = stmg::plan_hierarchy(opts.base, 1.0);
          print_hierarchy(levels);
          if (opts.show_stats)
            {
              const stmg::Setup setup = stmg::build_setup(
                stmg::manufactured_problem(), opts.base);
              stmg::print_smoother_stats(stmg::smoother_stats(setup));
            }
        }
      else if (self->parsed())
        {
          const auto checks = stmg::run_selftest();
          bool       all    = true;
          for (const auto &check : checks)
            {
              std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL",
                          check.name.c_str(), check.detail.c_str());
              all = all && check.passed;
            }
          if (!all)
            return 1;
        }
    }
  catch (const std::exception &e)
    {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  return 0;
}
