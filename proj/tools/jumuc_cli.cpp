// Command-line front end: solve one case in a chosen mode, or compare
// finished runs / parameter sweeps.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jumuc/driver.hpp"
#include "jumuc/master.hpp"
#include "jumuc/report.hpp"
#include "jumuc/system_model.hpp"

namespace fs = std::filesystem;
using namespace jumuc;

namespace {

struct SolveArgs {
  std::string case_path;
  std::string mode = "iccg";
  std::string out_dir = "run_out";
  SolverConfig cfg;
  bool verify = false;
};

void add_config_flags(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--case", a.case_path, "case file")->required();
  cmd->add_option("--mode", a.mode,
                  "iccg|ccg|deterministic-joint|deterministic-decoupled|"
                  "robust-decoupled");
  cmd->add_option("--gamma-d", a.cfg.gamma_load, "load deviation budget");
  cmd->add_option("--gamma-w", a.cfg.gamma_wind, "wind deviation budget");
  cmd->add_option("--error-frac", a.cfg.error_fraction,
                  "half-width as a fraction of the forecast");
  cmd->add_option("--delta", a.cfg.delta, "termination gap");
  cmd->add_option("--delta-tilde", a.cfg.delta_tilde, "inexactness gap");
  cmd->add_option("--delta-oa", a.cfg.delta_oa, "worst-case oracle gap");
  cmd->add_option("--eps-mp", a.cfg.eps_mp, "initial master gap");
  cmd->add_option("--alpha-shrink", a.cfg.alpha_shrink,
                  "master-gap shrink factor");
  cmd->add_option("--seed", a.cfg.seed, "recorded seed");
  cmd->add_option("--time-limit", a.cfg.time_limit_sec, "seconds");
  cmd->add_option("--max-iterations", a.cfg.max_iterations,
                  "outer iteration cap");
}

int run_solve(SolveArgs& a) {
  a.cfg.mode = parse_mode(a.mode);
  PowerSystem sys = load_case(a.case_path);

  RunManifest man;
  man.case_path = a.case_path;
  man.case_digest = sha256_file(a.case_path);
  man.out_dir = a.out_dir;
  man.config = a.cfg;
  write_manifest(man);

  RobustSolution sol;
  try {
    sol = run(sys, a.cfg);
  } catch (const MasterInfeasible& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    for (const std::string& fam : e.families)
      std::fprintf(stderr, "  violated family: %s\n", fam.c_str());
    return 2;
  }
  write_run_artifacts(man, sys, sol);
  std::printf("%s", render_report_text(sys, a.cfg, sol).c_str());
  std::printf("Artifacts written to %s\n", a.out_dir.c_str());

  if (a.verify) {
    const std::vector<std::string> problems = verify_run(load_run(a.out_dir));
    if (!problems.empty()) {
      for (const std::string& p : problems)
        std::fprintf(stderr, "verify: %s\n", p.c_str());
      return 1;
    }
    std::printf("Verification passed: report matches a re-derivation from "
                "the case file.\n");
  }
  if (!sol.state.converged) {
    std::fprintf(stderr, "not converged: %s\n",
                 sol.state.stop_reason.c_str());
    return 3;
  }
  return 0;
}

int run_compare_dirs(const std::vector<std::string>& dirs) {
  std::vector<StoredRun> runs;
  std::vector<std::string> missing;
  for (const std::string& d : dirs) {
    try {
      runs.push_back(load_run(d));
    } catch (const std::exception& e) {
      missing.push_back(d + ": " + e.what());
    }
  }
  if (!missing.empty()) {
    for (const std::string& m : missing)
      std::fprintf(stderr, "incomplete run directory: %s\n", m.c_str());
    return 1;
  }
  std::printf("%s", comparison_table(runs).c_str());
  return 0;
}

int run_compare_sweep(SolveArgs& a, const std::vector<double>& eps_list,
                      const std::vector<double>& alpha_list, int repeats) {
  PowerSystem sys = load_case(a.case_path);

  const auto average = [&](const SolverConfig& cfg) {
    SweepCell cell;
    cell.eps_mp = cfg.eps_mp;
    cell.alpha_shrink = cfg.alpha_shrink;
    cell.repeats = repeats;
    for (int r = 0; r < repeats; ++r) {
      RobustSolution sol = run(sys, cfg);
      double wall = 0.0;
      for (const IterationRecord& rec : sol.state.records)
        wall += rec.wall_ms;
      cell.total += sol.objective / repeats;
      cell.wall_ms += wall / repeats;
      cell.iterations += (double)sol.state.iterations / repeats;
    }
    return cell;
  };

  SolverConfig ref_cfg = a.cfg;
  ref_cfg.mode = RunMode::Ccg;
  const SweepCell reference = average(ref_cfg);

  std::vector<SweepCell> cells;
  for (double eps : eps_list)
    for (double alpha : alpha_list) {
      SolverConfig cfg = a.cfg;
      cfg.mode = RunMode::Iccg;
      cfg.eps_mp = eps;
      cfg.alpha_shrink = alpha;
      cells.push_back(average(cfg));
    }
  std::printf("%s", sweep_table(cells, reference).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust joint maintenance / commitment planner"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "solve one case");
  add_config_flags(solve, sa);
  solve->add_option("--out", sa.out_dir, "output directory");
  solve->add_flag("--verify", sa.verify,
                  "re-derive the report from the artifacts and fail on "
                  "mismatch");

  SolveArgs ca;
  std::vector<std::string> dirs;
  std::vector<double> eps_list{0.008, 0.001};
  std::vector<double> alpha_list{0.9, 0.2};
  int repeats = 1;
  bool sweep = false;
  CLI::App* compare = app.add_subcommand("compare", "compare finished runs");
  compare->add_option("--runs", dirs, "run directories to compare");
  compare->add_flag("--sweep", sweep, "run an (eps_mp, alpha_shrink) sweep");
  compare->add_option("--case", ca.case_path, "case file (sweep)");
  compare->add_option("--gamma-d", ca.cfg.gamma_load, "load budget (sweep)");
  compare->add_option("--gamma-w", ca.cfg.gamma_wind, "wind budget (sweep)");
  compare->add_option("--error-frac", ca.cfg.error_fraction,
                      "half-width fraction (sweep)");
  compare->add_option("--eps-list", eps_list, "eps_mp grid (sweep)");
  compare->add_option("--alpha-list", alpha_list, "alpha_shrink grid (sweep)");
  compare->add_option("--repeats", repeats, "repetitions per cell");
  compare->add_option("--time-limit", ca.cfg.time_limit_sec, "seconds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(sa);
    if (sweep) {
      if (ca.case_path.empty()) {
        std::fprintf(stderr, "--sweep requires --case\n");
        return 1;
      }
      return run_compare_sweep(ca, eps_list, alpha_list, repeats);
    }
    if (dirs.empty()) {
      std::fprintf(stderr, "compare needs --runs or --sweep\n");
      return 1;
    }
    return run_compare_dirs(dirs);
  } catch (const CaseError& e) {
    for (const std::string& m : e.errors())
      std::fprintf(stderr, "case error: %s\n", m.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
