// Solver acceptance battery: end-to-end checks of the robust planning
// pipeline at desk scale.  Each criterion prints exactly one PASS/FAIL/SKIP
// line; the exit code is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "jumuc/driver.hpp"
#include "jumuc/duality.hpp"
#include "jumuc/formulation.hpp"
#include "jumuc/master.hpp"
#include "jumuc/oa.hpp"
#include "jumuc/system_model.hpp"

using namespace jumuc;

#ifndef JUMUC_CASE_DIR
#define JUMUC_CASE_DIR "cases"
#endif

namespace {

const std::string kTiny = std::string(JUMUC_CASE_DIR) + "/tiny3.case";
const std::string kSmall = std::string(JUMUC_CASE_DIR) + "/small5.case";
const std::string kRts = std::string(JUMUC_CASE_DIR) + "/rts79.case";

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double sec() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

// Every robust run made by the battery is kept for the log-replay criterion.
struct TrackedRun {
  std::string tag;
  SolverConfig cfg;
  IterationState state;
};
std::vector<TrackedRun> g_runs;

RobustSolution tracked_run(const std::string& tag, const PowerSystem& sys,
                           const SolverConfig& cfg) {
  RobustSolution sol = run(sys, cfg);
  g_runs.push_back({tag, cfg, sol.state});
  return sol;
}

SolverConfig exact_cfg(RunMode mode, double gd, double gw, double err) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.gamma_load = gd;
  cfg.gamma_wind = gw;
  cfg.error_fraction = err;
  cfg.eps_mp = 0.0;
  cfg.delta = 1e-7;
  cfg.delta_tilde = 5e-8;
  cfg.delta_oa = 1e-7;
  return cfg;
}

// ---------------------------------------------------------------- helpers

// Minimal startup indicators implied by a commitment pattern (tau_t >=
// max(0, u_t - u_{t-1}) with the fleet assumed off before the horizon).
void set_minimal_tau(const MatrixForm& mf, int units, int T,
                     std::vector<double>& x) {
  for (int g = 0; g < units; ++g)
    for (int t = 0; t < T; ++t) {
      double prev = t == 0 ? 0.0 : x[mf.x_index.at("u", g, t - 1)];
      double cur = x[mf.x_index.at("u", g, t)];
      x[mf.x_index.at("tau", g, t)] = std::max(0.0, cur - prev);
    }
}

// All feasible first-stage vectors on a one-task system, enumerated over
// every maintenance start and every commitment pattern.  Startup indicators
// are set at their lower bounds: any feasible vector with extra indicators
// differs only by nonnegative startup cost and leaves the recourse problem
// unchanged, so the minimal-tau representative dominates it.
std::vector<std::vector<double>> enumerate_first_stage(const MatrixForm& mf,
                                                       const PowerSystem& sys) {
  const int T = sys.horizon;
  const int units = (int)sys.units.size();
  const int dur = sys.maintenance[0].duration;
  std::vector<std::vector<double>> out;
  for (int s = 0; s + dur <= T; ++s) {
    for (int bits = 0; bits < (1 << (units * T)); ++bits) {
      std::vector<double> x(mf.dim_x(), 0.0);
      x[mf.x_index.at("q", 0, s)] = 1.0;
      for (int h = s; h < s + dur; ++h) x[mf.x_index.at("m", 0, h)] = 1.0;
      for (int g = 0; g < units; ++g)
        for (int t = 0; t < T; ++t)
          x[mf.x_index.at("u", g, t)] = (bits >> (g * T + t)) & 1 ? 1.0 : 0.0;
      set_minimal_tau(mf, units, T, x);
      if (first_stage_violations(mf, x).empty()) out.push_back(std::move(x));
    }
  }
  return out;
}

// Random member of the budgeted interval set (deviation fractions scaled
// into the per-period budget on each side).
ScenarioRealization random_member(const UncertaintySet& set, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ScenarioRealization s;
  const int T = set.horizon();
  auto fill = [&](const std::vector<std::vector<double>>& mean,
                  const std::vector<std::vector<double>>& half, double gamma,
                  std::vector<std::vector<double>>& out) {
    const int n = (int)mean.size();
    out.assign(n, std::vector<double>(T, 0.0));
    for (int t = 0; t < T; ++t) {
      std::vector<double> xi(n, 0.0);
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        xi[i] = half[i][t] > 0.0 ? uni(rng) : 0.0;
        total += std::fabs(xi[i]);
      }
      if (total > gamma && total > 0.0)
        for (int i = 0; i < n; ++i) xi[i] *= gamma / total;
      for (int i = 0; i < n; ++i) out[i][t] = mean[i][t] + half[i][t] * xi[i];
    }
  };
  fill(set.load_mean, set.load_half, set.gamma_load, s.load);
  fill(set.wind_mean, set.wind_half, set.gamma_wind, s.wind);
  return s;
}

// Random feasible first-stage point on small5: random maintenance starts,
// everything committed outside the outage windows, then a few random
// whole-unit shutdown attempts kept only when the plan stays feasible.
std::vector<double> random_small5_x(const MatrixForm& mf,
                                    const PowerSystem& sys, std::mt19937& rng) {
  const int T = sys.horizon;
  const int units = (int)sys.units.size();
  std::uniform_int_distribution<int> pick_start(0, T - 2);
  std::uniform_int_distribution<int> pick_unit(0, units - 1);
  for (int attempt = 0; attempt < 400; ++attempt) {
    std::vector<double> x(mf.dim_x(), 0.0);
    for (size_t n = 0; n < sys.maintenance.size(); ++n) {
      const int dur = sys.maintenance[n].duration;
      int s = std::min(pick_start(rng), T - dur);
      x[mf.x_index.at("q", (int)n, s)] = 1.0;
      for (int h = s; h < s + dur; ++h) x[mf.x_index.at("m", (int)n, h)] = 1.0;
    }
    for (int g = 0; g < units; ++g)
      for (int t = 0; t < T; ++t) x[mf.x_index.at("u", g, t)] = 1.0;
    for (size_t n = 0; n < sys.maintenance.size(); ++n) {
      const int g = sys.unit_index(sys.maintenance[n].unit);
      for (int t = 0; t < T; ++t)
        if (x[mf.x_index.at("m", (int)n, t)] > 0.5)
          x[mf.x_index.at("u", g, t)] = 0.0;
    }
    set_minimal_tau(mf, units, T, x);
    if (!first_stage_violations(mf, x).empty()) continue;
    // up to two shutdown tweaks for variety
    for (int k = rng() % 3; k > 0; --k) {
      std::vector<double> trial = x;
      const int g = pick_unit(rng);
      for (int t = 0; t < T; ++t) trial[mf.x_index.at("u", g, t)] = 0.0;
      set_minimal_tau(mf, units, T, trial);
      if (first_stage_violations(mf, trial).empty()) x = std::move(trial);
    }
    return x;
  }
  throw std::runtime_error("could not sample a feasible first stage");
}

// Re-derives every branch decision of a convergence log from the logged
// bounds and the configured tolerances.
std::vector<std::string> replay_problems(const TrackedRun& r) {
  std::vector<std::string> out;
  const bool exact = r.cfg.mode == RunMode::Ccg;
  double prev_lin = -1e300;
  for (size_t i = 0; i < r.state.records.size(); ++i) {
    const IterationRecord& rec = r.state.records[i];
    const double gap = (rec.U_bar - rec.L_in) / std::max(1.0, std::fabs(rec.U_bar));
    const double inx = (rec.U_bar - rec.U_in) / std::max(1.0, std::fabs(rec.U_bar));
    if (std::fabs(gap - rec.gap) > 1e-9)
      out.push_back(fmt("%s iter %zu: logged gap differs", r.tag.c_str(), i + 1));
    std::string expect;
    if (gap <= r.cfg.delta)
      expect = "CONVERGED";
    else if (!exact && inx < r.cfg.delta_tilde)
      expect = "SHRINK_EPS";
    else
      expect = "ADD_SCENARIO";
    if (rec.action != expect)
      out.push_back(fmt("%s iter %zu: action %s, replay says %s", r.tag.c_str(),
                        i + 1, rec.action.c_str(), expect.c_str()));
    if (rec.L_in < prev_lin - 1e-9)
      out.push_back(fmt("%s iter %zu: inner lower bound regressed", r.tag.c_str(), i + 1));
    prev_lin = rec.L_in;
  }
  if (r.state.converged) {
    const IterationRecord& last = r.state.records.back();
    if (last.gap > r.cfg.delta + 1e-15)
      out.push_back(fmt("%s: converged with final gap %.3e > delta", r.tag.c_str(), last.gap));
  }
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome crit_singleton() {
  Outcome o;
  std::string detail;
  bool ok = true;
  for (const std::string& path : {kTiny, kSmall}) {
    Timer t;
    PowerSystem sys = load_case(path);
    SolverConfig det_cfg;  // stock tolerances for both modes
    det_cfg.mode = RunMode::DeterministicJoint;
    SolverConfig rob_cfg = det_cfg;
    rob_cfg.mode = RunMode::Iccg;
    rob_cfg.gamma_load = rob_cfg.gamma_wind = 0.0;
    RobustSolution det = tracked_run("det:" + sys.name, sys, det_cfg);
    RobustSolution rob = tracked_run("iccg0:" + sys.name, sys, rob_cfg);
    const double d = rel(rob.objective, det.objective);
    const double sec = t.sec();
    ok = ok && d <= 1e-6 && rob.state.converged && sec < 10.0;
    detail += fmt("%s %.2f vs %.2f (rel %.1e, %.1fs) ", sys.name.c_str(),
                  rob.objective, det.objective, d, sec);
  }
  o.pass = ok;
  o.detail = detail;
  return o;
}

Outcome crit_strong_duality() {
  Timer t;
  PowerSystem sys = load_case(kSmall);
  UncertaintySet set = build_uncertainty_set(sys, 0.15, 2.0, 1.0);
  MatrixForm mf = assemble_matrix_form(sys, set);
  std::mt19937 rng(20260814);
  int agree = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x = random_small5_x(mf, sys, rng);
    ScenarioRealization v = random_member(set, rng);
    RecourseResult primal = evaluate_recourse(mf, set, x, v);
    double cx = 0.0;
    for (int i = 0; i < mf.dim_x(); ++i) cx += mf.c[i] * x[i];
    BilinearMaxProblem bp = dualize(mf, set, x);
    DualSolution dual = solve_fixed_scenario_dual(bp, scenario_to_vector(mf, v));
    const double d = rel(primal.objective + cx, dual.objective);
    worst = std::max(worst, d);
    if (d <= 1e-6) ++agree;
  }
  const double sec = t.sec();
  Outcome o;
  o.pass = agree == 100 && sec < 60.0;
  o.detail = fmt("100 random (x,v) pairs, %d agree, worst rel %.2e, %.1fs", agree, worst, sec);
  return o;
}

Outcome crit_robust_oracle() {
  Timer t;
  PowerSystem sys = load_case(kTiny);
  Outcome o;
  o.pass = true;
  for (auto [gd, gw] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}}) {
    UncertaintySet set = build_uncertainty_set(sys, 0.25, gd, gw);
    MatrixForm mf = assemble_matrix_form(sys, set);
    std::vector<std::vector<double>> xs = enumerate_first_stage(mf, sys);
    double opt = 1e300;
    for (const std::vector<double>& x : xs)
      opt = std::min(opt, brute_force_worst_case(mf, set, x).objective);

    SolverConfig ic;
    ic.mode = RunMode::Iccg;
    ic.gamma_load = gd;
    ic.gamma_wind = gw;
    ic.error_fraction = 0.25;
    SolverConfig cc = ic;
    cc.mode = RunMode::Ccg;
    RobustSolution a = tracked_run(fmt("oracle-iccg-%g-%g", gd, gw), sys, ic);
    RobustSolution c = tracked_run(fmt("oracle-ccg-%g-%g", gd, gw), sys, cc);
    const double da = rel(a.objective, opt), dc = rel(c.objective, opt);
    o.pass = o.pass && da <= 0.002 && dc <= 0.002 && !xs.empty();
    o.detail += fmt("G=(%g,%g): %zu plans, opt %.2f, iccg %.1e, ccg %.1e ",
                    gd, gw, xs.size(), opt, da, dc);
  }
  const double sec = t.sec();
  o.pass = o.pass && sec < 300.0;
  o.detail += fmt("(%.1fs)", sec);
  return o;
}

Outcome crit_oa_upper_bound() {
  Timer t;
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.25, 1.0, 1.0);
  MatrixForm mf = assemble_matrix_form(sys, set);
  std::vector<std::vector<double>> xs = enumerate_first_stage(mf, sys);
  std::mt19937 rng(77);
  const double delta_oa = 1e-3;
  int ok = 0;
  double worst_under = 0.0, worst_over = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::vector<double>& x = xs[rng() % xs.size()];
    WorstCase brute = brute_force_worst_case(mf, set, x);
    BilinearMaxProblem bp = dualize(mf, set, x);
    OaResult oa = solve_worst_case(bp, pick_initial_scenario(set), delta_oa, 100);
    const double under = brute.objective - oa.upper_bound;            // >0 = missed mass
    const double over = oa.upper_bound - brute.objective;             // certificate slack
    worst_under = std::max(worst_under, under);
    worst_over = std::max(worst_over, over);
    if (under <= 1e-6 && over <= delta_oa * std::max(1.0, oa.upper_bound) + 1e-9) ++ok;
  }
  const double sec = t.sec();
  Outcome o;
  o.pass = ok == 20 && sec < 120.0;
  o.detail = fmt("20 random plans, %d in band, max undershoot %.1e, max slack %.1e, %.1fs",
                 ok, worst_under, worst_over, sec);
  return o;
}

Outcome crit_replay() {
  Outcome o;
  int converged = 0;
  std::vector<std::string> problems;
  for (const TrackedRun& r : g_runs) {
    if (r.state.converged) ++converged;
    std::vector<std::string> p = replay_problems(r);
    problems.insert(problems.end(), p.begin(), p.end());
  }
  o.pass = problems.empty() && converged > 0;
  o.detail = fmt("%zu runs (%d converged) replayed", g_runs.size(), converged);
  if (!problems.empty()) o.detail += "; first problem: " + problems.front();
  return o;
}

void run_ordering(const PowerSystem& sys, double gd, double gw, double err,
                  Outcome& o) {
  RobustSolution rj = tracked_run("ord-rj:" + sys.name, sys,
                                  exact_cfg(RunMode::Iccg, gd, gw, err));
  RobustSolution rd = tracked_run("ord-rd:" + sys.name, sys,
                                  exact_cfg(RunMode::RobustDecoupled, gd, gw, err));
  RobustSolution dj = tracked_run("ord-dj:" + sys.name, sys,
                                  exact_cfg(RunMode::DeterministicJoint, 0, 0, err));
  RobustSolution dd = tracked_run("ord-dd:" + sys.name, sys,
                                  exact_cfg(RunMode::DeterministicDecoupled, 0, 0, err));
  const double tol = 1e-9;
  bool ok = rj.objective <= rd.objective * (1 + tol) &&
            dj.objective <= dd.objective * (1 + tol) &&
            rj.objective >= dj.objective * (1 - tol) &&
            rd.objective >= dd.objective * (1 - tol);
  o.pass = o.pass && ok;
  o.detail += fmt("rj %.2f <= rd %.2f, dj %.2f <= dd %.2f, robust >= det %s",
                  rj.objective, rd.objective, dj.objective, dd.objective,
                  ok ? "yes" : "NO");
}

Outcome crit_ordering() {
  Timer t;
  PowerSystem sys = load_case(kSmall);
  UncertaintySet probe = build_uncertainty_set(sys, 0.15, 0, 0);
  const double gd = 0.2 * probe.num_loads();
  const double gw = 0.2 * probe.num_wind();
  Outcome o;
  o.pass = true;
  run_ordering(sys, gd, gw, 0.15, o);
  const double sec = t.sec();
  o.pass = o.pass && sec < 600.0;
  o.detail += fmt(" (G=(%.1f,%.1f), %.1fs)", gd, gw, sec);
  return o;
}

Outcome crit_sweep() {
  Timer t;
  PowerSystem sys = load_case(kSmall);
  SolverConfig base;
  base.mode = RunMode::Ccg;
  base.gamma_load = 2.0;
  base.gamma_wind = 1.0;
  base.error_fraction = 0.15;
  RobustSolution ref = tracked_run("sweep-ccg", sys, base);
  Outcome o;
  o.pass = ref.state.converged;
  o.detail = fmt("ccg %.2f;", ref.objective);
  for (double eps : {0.008, 0.001})
    for (double alpha : {0.9, 0.2}) {
      SolverConfig cfg = base;
      cfg.mode = RunMode::Iccg;
      cfg.eps_mp = eps;
      cfg.alpha_shrink = alpha;
      RobustSolution sol =
          tracked_run(fmt("sweep-%g-%g", eps, alpha), sys, cfg);
      const double d = rel(sol.objective, ref.objective);
      o.pass = o.pass && d <= 0.002 && sol.state.converged;
      o.detail += fmt(" (%g,%g) %.2f rel %.1e;", eps, alpha, sol.objective, d);
    }
  const double sec = t.sec();
  o.pass = o.pass && sec < 900.0;
  o.detail += fmt(" %.1fs", sec);
  return o;
}

Outcome crit_budget_monotone() {
  Timer t;
  PowerSystem sys = load_case(kTiny);
  Outcome o;
  o.pass = true;
  double prev = -1.0;
  for (double g : {0.0, 1.0, 2.0}) {
    RobustSolution sol = tracked_run(
        fmt("mono-%g", g), sys,
        exact_cfg(RunMode::Iccg, g, std::min(g, 1.0), 0.25));
    o.pass = o.pass && sol.objective >= prev - 1e-9 * std::max(1.0, sol.objective);
    o.detail += fmt("G=%g: %.2f; ", g, sol.objective);
    prev = sol.objective;
  }
  const double sec = t.sec();
  o.pass = o.pass && sec < 300.0;
  o.detail += fmt("%.1fs", sec);
  return o;
}

Outcome crit_linearization() {
  Timer t;
  PowerSystem sys = load_case(kTiny);
  int incumbents = 0;
  double worst_eta = 0.0, worst_obj = 0.0;
  for (auto [gd, gw] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}}) {
    UncertaintySet set = build_uncertainty_set(sys, 0.25, gd, gw);
    MatrixForm mf = assemble_matrix_form(sys, set);
    const int T = sys.horizon, units = (int)sys.units.size();

    MasterModel master = init_master(mf, sys);
    add_scenario(master, scenario_to_vector(mf, pick_initial_scenario(set)));
    // a second adopted scenario so incumbents carry multiple blocks
    add_scenario(master, scenario_to_vector(mf, scenario_center(set)));

    double L_bar = 0.0;
    for (int iter = 1; iter <= 10; ++iter) {
      MasterResult res = solve_master(master, 1e-3, L_bar);
      L_bar = std::max(L_bar, res.L_in);
      ++incumbents;

      // product columns match u*p exactly at the incumbent
      double cx = 0.0, kx = 0.0;
      for (int i = 0; i < mf.dim_x(); ++i) {
        cx += mf.c[i] * res.mip.x[i];
        kx += mf.k[i] * res.mip.x[i];
      }
      double alpha_raw = -1e300;
      for (const ScenarioBlock& blk : master.blocks) {
        std::vector<double> y(mf.dim_y());
        for (int j = 0; j < mf.dim_y(); ++j) y[j] = res.mip.x[blk.y0 + j];
        for (int g = 0; g < units; ++g)
          for (int tt = 0; tt < T; ++tt) {
            const int ecol = blk.eta[g * T + tt];
            if (ecol < 0) continue;
            const double u = res.mip.x[mf.x_index.at("u", g, tt)];
            const double p = y[mf.y_index.at("p", g, tt)];
            worst_eta = std::max(worst_eta, std::fabs(res.mip.x[ecol] - u * p));
          }
        double raw = kx;
        for (int j = 0; j < mf.dim_y(); ++j) raw += mf.b[j] * y[j];
        for (int i = 0; i < mf.dim_x(); ++i)
          if (res.mip.x[i] != 0.0) raw += res.mip.x[i] * mf.L.row_dot(i, y);
        alpha_raw = std::max(alpha_raw, raw);
      }
      // raw schedule/dispatch cost agrees with the reported model objective
      worst_obj = std::max(worst_obj, rel(cx + alpha_raw, res.U_in));

      BilinearMaxProblem bp = dualize(mf, set, res.xhat);
      OaResult oa = solve_worst_case(bp, pick_initial_scenario(set), 1e-3, 100);
      if ((oa.upper_bound - res.L_in) / std::max(1.0, std::fabs(oa.upper_bound)) <= 0.002)
        break;
      const std::vector<double> v = scenario_to_vector(mf, oa.scenario);
      if (has_scenario(master, v)) break;
      add_scenario(master, v);
    }
  }
  Outcome o;
  o.pass = worst_eta <= 1e-6 && worst_obj <= 1e-6 && incumbents >= 2;
  o.detail = fmt("%d incumbents, max |eta - u*p| %.1e, max objective rel err %.1e, %.1fs",
                 incumbents, worst_eta, worst_obj, t.sec());
  return o;
}

PowerSystem reduce_to_day(PowerSystem s) {
  const int T = 24;
  s.name += "-24h";
  s.horizon = T;
  for (Load& l : s.loads) l.forecast.resize(T);
  for (WindFarm& w : s.wind) w.forecast.resize(T);
  s.resource_budget.resize(T);
  std::vector<MaintenanceTask> keep;
  for (const MaintenanceTask& m : s.maintenance)
    if (m.reported_start + m.duration - 1 <= T) keep.push_back(m);
  s.maintenance = keep;
  return s;
}

Outcome crit_external_day() {
  Outcome o;
  if (!std::getenv("JUMUC_EXTERNAL_SOLVER")) {
    o.skipped = true;
    o.detail = "JUMUC_EXTERNAL_SOLVER not set";
    return o;
  }
  Timer t;
  PowerSystem sys = reduce_to_day(load_case(kRts));
  UncertaintySet probe = build_uncertainty_set(sys, 0.15, 0, 0);
  const double gd = 0.2 * probe.num_loads();
  const double gw = 0.2 * probe.num_wind();
  Outcome inner;
  inner.pass = true;
  run_ordering(sys, gd, gw, 0.15, inner);
  o.pass = inner.pass;
  o.detail = inner.detail + fmt(" (%zu tasks kept, %.0fs)", sys.maintenance.size(), t.sec());
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "singleton reduction equals the deterministic solve", crit_singleton},
      {2, "strong duality on random plan/scenario pairs", crit_strong_duality},
      {3, "exhaustive robust optimum matched by both solvers", crit_robust_oracle},
      {4, "worst-case oracle brackets the brute-force value", crit_oa_upper_bound},
      {5, "convergence logs replay their branch decisions", crit_replay},
      {6, "joint/robust cost orderings on the 5-bus system", crit_ordering},
      {7, "inexact sweep stays within 0.2% of the exact solver", crit_sweep},
      {8, "robust cost nondecreasing in the budget", crit_budget_monotone},
      {9, "product linearization exact at master incumbents", crit_linearization},
      {10, "one-day reduction orderings via external solver", crit_external_day},
  };
  // The replay criterion audits every run the battery makes, so it is
  // evaluated last; results still print in numeric order.
  const int order[] = {1, 2, 3, 4, 6, 7, 8, 9, 10, 5};
  Outcome results[11];
  for (int id : order) {
    const Entry& e = entries[id - 1];
    try {
      results[id] = e.fn();
    } catch (const std::exception& ex) {
      results[id].pass = false;
      results[id].detail = std::string("exception: ") + ex.what();
    }
  }
  int failures = 0;
  for (const Entry& e : entries) {
    const Outcome& o = results[e.id];
    const char* tag = o.skipped ? "SKIP" : o.pass ? "PASS" : "FAIL";
    if (!o.skipped && !o.pass) ++failures;
    std::printf("[%2d] %s  %s — %s\n", e.id, tag, e.name, o.detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures;
}
