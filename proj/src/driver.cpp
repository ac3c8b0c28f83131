#include "jumuc/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "jumuc/tolerances.hpp"

namespace jumuc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rel_gap(double upper, double lower) {
  return (upper - lower) / std::max(1.0, std::fabs(upper));
}

struct ExactEval {
  ScenarioRealization scenario;
  std::vector<double> y;
  double total = 0.0;
};

// Re-evaluates candidate realizations with the exact recourse LP and keeps
// the costliest one; ties keep the earlier candidate.
ExactEval certify_worst(const MatrixForm& mf, const UncertaintySet& set,
                        const std::vector<double>& xhat,
                        const std::vector<ScenarioRealization>& candidates) {
  if (candidates.empty())
    throw std::logic_error("certify_worst: no candidate scenarios");
  const double cx = dot(mf.c, xhat);
  ExactEval best;
  bool have = false;
  for (const ScenarioRealization& s : candidates) {
    if (have && scenarios_equal(best.scenario, s, tol::kScenarioDedup))
      continue;
    RecourseResult r = evaluate_recourse(mf, set, xhat, s);
    const double total = cx + r.objective;
    if (!have || total > best.total) {
      best.scenario = s;
      best.y = r.lp.x;
      best.total = total;
      have = true;
    }
  }
  return best;
}

std::vector<MaintenanceInterval> extract_schedule(
    const MatrixForm& mf, const PowerSystem& sys,
    const std::vector<double>& x) {
  std::vector<MaintenanceInterval> out;
  for (size_t n = 0; n < sys.maintenance.size(); ++n) {
    const MaintenanceTask& task = sys.maintenance[n];
    MaintenanceInterval iv;
    iv.unit_id = task.unit;
    for (int t = 0; t < sys.horizon; ++t) {
      if (!mf.x_index.has("q", (int)n, t)) continue;
      if (x[mf.x_index.at("q", (int)n, t)] > 0.5) {
        iv.start = t + 1;
        iv.end = t + task.duration;
        break;
      }
    }
    out.push_back(iv);
  }
  return out;
}

std::vector<std::vector<double>> extract_commitment(
    const MatrixForm& mf, const PowerSystem& sys,
    const std::vector<double>& x) {
  std::vector<std::vector<double>> u(sys.units.size(),
                                     std::vector<double>(sys.horizon, 0.0));
  for (size_t g = 0; g < sys.units.size(); ++g)
    for (int t = 0; t < sys.horizon; ++t)
      u[g][t] = x[mf.x_index.at("u", (int)g, t)] > 0.5 ? 1.0 : 0.0;
  return u;
}

RobustSolution assemble_solution(const MatrixForm& mf, const PowerSystem& sys,
                                 const UncertaintySet& set,
                                 const SolverConfig& cfg,
                                 const std::vector<double>& xhat,
                                 const std::vector<ScenarioRealization>& cands,
                                 IterationState state) {
  ExactEval ev = certify_worst(mf, set, xhat, cands);
  RobustSolution sol;
  sol.mode = cfg.mode;
  sol.x = xhat;
  sol.schedule = extract_schedule(mf, sys, xhat);
  sol.commitment = extract_commitment(mf, sys, xhat);
  sol.worst = ev.scenario;
  sol.dispatch = ev.y;
  sol.breakdown = cost_breakdown(mf, xhat, ev.y);
  sol.objective = sol.breakdown.total;
  sol.state = std::move(state);
  return sol;
}

// Shared outer loop.  `exact_mode` pins the master gap and disables the
// shrink branch (plain column-and-constraint generation).
RobustSolution run_loop(const PowerSystem& sys, const SolverConfig& cfg,
                        bool exact_mode, bool pin_maintenance) {
  const UncertaintySet set = build_uncertainty_set(
      sys, cfg.error_fraction, cfg.gamma_load, cfg.gamma_wind);
  const MatrixForm mf = assemble_matrix_form(sys, set);
  MasterModel master = init_master(mf, sys);
  if (pin_maintenance) fix_maintenance_at_reported(master, sys);

  double eps = exact_mode ? 1e-4 : cfg.eps_mp;
  double L_bar = 0.0;
  IterationState st;
  const Clock::time_point t_run = Clock::now();

  const ScenarioRealization seed = pick_initial_scenario(set);
  add_scenario(master, scenario_to_vector(mf, seed));

  MasterResult res;
  OaResult oa;
  int stalls = 0;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const Clock::time_point t_iter = Clock::now();
    MipOptions mo;
    mo.node_limit = cfg.node_limit;
    if (cfg.time_limit_sec > 0.0) {
      const double remaining = cfg.time_limit_sec - seconds_since(t_run);
      if (remaining <= 0.0) {
        st.stop_reason = "time limit reached";
        break;
      }
      mo.time_limit_sec = remaining;
    }

    res = solve_master(master, eps, L_bar, mo);
    L_bar = std::max(L_bar, res.L_in);

    const BilinearMaxProblem bp = dualize(mf, set, res.xhat);
    oa = solve_worst_case(bp, pick_initial_scenario(set), cfg.delta_oa,
                          cfg.oa_iteration_cap);

    const double U_bar = oa.upper_bound;
    const double gap = rel_gap(U_bar, res.L_in);
    const double inexact = rel_gap(U_bar, res.U_in);

    IterationRecord rec;
    rec.iter = iter;
    rec.eps_mp = eps;
    rec.L_bar = L_bar;
    rec.L_in = res.L_in;
    rec.U_in = res.U_in;
    rec.U_bar = U_bar;
    rec.gap = gap;
    rec.inexact_gap = inexact;

    const std::vector<double> v_hat = scenario_to_vector(mf, oa.scenario);
    const std::vector<double> v_best =
        scenario_to_vector(mf, oa.best_evaluated);
    bool added = false;
    if (gap <= cfg.delta) {
      rec.action = "CONVERGED";
      st.converged = true;
      st.stop_reason = "relative gap within tolerance";
    } else if (!exact_mode && inexact < cfg.delta_tilde) {
      // Master inexactness dominates the gap: tighten it before asking for
      // more scenarios, adopting the current worst case when it is new.
      rec.action = "SHRINK_EPS";
      eps *= cfg.alpha_shrink;
      if (!has_scenario(master, v_hat)) {
        add_scenario(master, v_hat);
        added = true;
      }
    } else {
      rec.action = "ADD_SCENARIO";
      if (!has_scenario(master, v_hat)) {
        add_scenario(master, v_hat);
        added = true;
      } else if (!has_scenario(master, v_best)) {
        add_scenario(master, v_best);
        added = true;
      }
    }
    rec.scenario_added = added;
    rec.scenario_count = (int)master.scenarios.size();
    rec.wall_ms = seconds_since(t_iter) * 1000.0;

    st.records.push_back(rec);
    st.oracle_traces.push_back(oa.state.trace);
    st.best_upper = iter == 1 ? U_bar : std::min(st.best_upper, U_bar);
    st.final_gap = gap;
    st.iterations = iter;

    if (st.converged) break;
    if (rec.action == "ADD_SCENARIO" && !added) {
      if (++stalls >= 3) {
        st.stop_reason =
            "stalled: worst-case scenarios repeat without closing the gap";
        break;
      }
    } else {
      stalls = 0;
    }
    if (iter == cfg.max_iterations) st.stop_reason = "iteration limit reached";
  }

  if (st.records.empty())
    throw std::runtime_error("outer loop made no iterations: " +
                             st.stop_reason);
  st.scenario_count = (int)master.scenarios.size();
  return assemble_solution(mf, sys, set, cfg, res.xhat,
                           {oa.scenario, oa.best_evaluated}, std::move(st));
}

}  // namespace

RunMode parse_mode(const std::string& name) {
  if (name == "iccg") return RunMode::Iccg;
  if (name == "ccg") return RunMode::Ccg;
  if (name == "deterministic-joint") return RunMode::DeterministicJoint;
  if (name == "deterministic-decoupled")
    return RunMode::DeterministicDecoupled;
  if (name == "robust-decoupled") return RunMode::RobustDecoupled;
  throw std::invalid_argument("unknown mode: " + name);
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Iccg:
      return "iccg";
    case RunMode::Ccg:
      return "ccg";
    case RunMode::DeterministicJoint:
      return "deterministic-joint";
    case RunMode::DeterministicDecoupled:
      return "deterministic-decoupled";
    case RunMode::RobustDecoupled:
      return "robust-decoupled";
  }
  return "unknown";
}

CostBreakdown cost_breakdown(const MatrixForm& mf, const std::vector<double>& x,
                             const std::vector<double>& y) {
  if ((int)x.size() != mf.dim_x() || (int)y.size() != mf.dim_y())
    throw std::invalid_argument("cost_breakdown: dimension mismatch");
  CostBreakdown out;
  for (int j = 0; j < mf.dim_x(); ++j) {
    const VarRef& r = mf.x_index.ref(j);
    const double cost = mf.c[j] * x[j];
    if (r.kind == "q" || r.kind == "m")
      out.maintenance += cost;
    else
      out.commitment += cost;  // startup (tau) and no-load (u)
  }
  // Fuel enters as x'Ly + k'x, shedding and curtailment through b.
  const std::vector<double> Ly = mf.L.apply(y);
  out.dispatch = dot(mf.b, y) + dot(x, Ly) + dot(mf.k, x);
  out.total = out.maintenance + out.commitment + out.dispatch;
  return out;
}

RobustSolution run_iccg(const PowerSystem& sys, const SolverConfig& cfg) {
  return run_loop(sys, cfg, /*exact_mode=*/false, /*pin_maintenance=*/false);
}

RobustSolution run_ccg(const PowerSystem& sys, const SolverConfig& cfg) {
  return run_loop(sys, cfg, /*exact_mode=*/true, /*pin_maintenance=*/false);
}

RobustSolution run_robust_decoupled(const PowerSystem& sys,
                                    const SolverConfig& cfg) {
  return run_loop(sys, cfg, /*exact_mode=*/cfg.mode == RunMode::Ccg,
                  /*pin_maintenance=*/true);
}

RobustSolution run_deterministic(const PowerSystem& sys,
                                 const SolverConfig& cfg) {
  const bool pin = cfg.mode == RunMode::DeterministicDecoupled;
  const UncertaintySet set = build_uncertainty_set(
      sys, cfg.error_fraction, cfg.gamma_load, cfg.gamma_wind);
  const MatrixForm mf = assemble_matrix_form(sys, set);
  MasterModel master = init_master(mf, sys);
  if (pin) fix_maintenance_at_reported(master, sys);

  const ScenarioRealization center = scenario_center(set);
  add_scenario(master, scenario_to_vector(mf, center));

  MipOptions mo;
  mo.node_limit = cfg.node_limit;
  if (cfg.time_limit_sec > 0.0) mo.time_limit_sec = cfg.time_limit_sec;
  const Clock::time_point t0 = Clock::now();
  MasterResult res = solve_master(master, cfg.eps_mp, 0.0, mo);

  IterationState st;
  st.iterations = 1;
  st.converged = true;
  st.stop_reason = "single forecast-scenario solve";
  st.scenario_count = 1;

  IterationRecord rec;
  rec.iter = 1;
  rec.eps_mp = 0.0;
  rec.L_bar = 0.0;
  rec.L_in = res.L_in;
  rec.U_in = res.U_in;
  rec.U_bar = res.U_in;
  rec.gap = rel_gap(rec.U_bar, res.L_in);
  rec.inexact_gap = 0.0;
  rec.action = "CONVERGED";
  rec.wall_ms = seconds_since(t0) * 1000.0;
  rec.scenario_added = true;
  rec.scenario_count = 1;
  st.records.push_back(rec);
  st.best_upper = rec.U_bar;
  st.final_gap = rec.gap;

  return assemble_solution(mf, sys, set, cfg, res.xhat, {center},
                           std::move(st));
}

RobustSolution run(const PowerSystem& sys, const SolverConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::Iccg:
      return run_iccg(sys, cfg);
    case RunMode::Ccg:
      return run_ccg(sys, cfg);
    case RunMode::DeterministicJoint:
    case RunMode::DeterministicDecoupled:
      return run_deterministic(sys, cfg);
    case RunMode::RobustDecoupled:
      return run_robust_decoupled(sys, cfg);
  }
  throw std::logic_error("run: unhandled mode");
}

std::string convergence_csv(const IterationState& state) {
  std::string out =
      "iter,eps_mp,L_bar,L_in,U_in,U_bar,gap,inexact_gap,action,wall_ms\n";
  char buf[512];
  for (const IterationRecord& r : state.records) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.3f\n",
                  r.iter, r.eps_mp, r.L_bar, r.L_in, r.U_in, r.U_bar, r.gap,
                  r.inexact_gap, r.action.c_str(), r.wall_ms);
    out += buf;
  }
  return out;
}

}  // namespace jumuc
