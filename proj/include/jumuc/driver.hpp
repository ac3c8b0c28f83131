#pragma once

#include <string>
#include <vector>

#include "jumuc/duality.hpp"
#include "jumuc/formulation.hpp"
#include "jumuc/master.hpp"
#include "jumuc/oa.hpp"
#include "jumuc/system_model.hpp"

namespace jumuc {

enum class RunMode {
  Iccg,                    // inexact column-and-constraint generation
  Ccg,                     // exact C&CG (fixed tight master gap, no shrink)
  DeterministicJoint,      // one MILP at the forecast scenario
  DeterministicDecoupled,  // maintenance pinned at reported, then commit
  RobustDecoupled,         // maintenance pinned at reported, robust commit
};

RunMode parse_mode(const std::string& name);
std::string to_string(RunMode mode);

struct SolverConfig {
  RunMode mode = RunMode::Iccg;
  double gamma_load = 0.0;
  double gamma_wind = 0.0;
  double error_fraction = 0.1;  // half-width as a fraction of the forecast
  double delta = 0.002;         // relative optimality gap at termination
  double delta_tilde = 0.0015;  // inexactness gap that triggers a shrink
  double delta_oa = 0.001;      // worst-case oracle convergence gap
  double eps_mp = 0.001;        // initial relative gap handed to the master
  double alpha_shrink = 0.9;    // multiplier applied to eps_mp on a shrink
  int max_iterations = 50;
  int oa_iteration_cap = 100;
  double time_limit_sec = 0.0;  // 0 disables the limit
  long node_limit = 2000000;
  unsigned seed = 0;  // recorded in reports; the solve itself is deterministic
};

// One row of the outer-loop convergence log.  `action` is one of
// CONVERGED, SHRINK_EPS, ADD_SCENARIO.
struct IterationRecord {
  int iter = 0;
  double eps_mp = 0.0;
  double L_bar = 0.0;
  double L_in = 0.0;
  double U_in = 0.0;
  double U_bar = 0.0;
  double gap = 0.0;          // (U_bar - L_in) / max(1, |U_bar|)
  double inexact_gap = 0.0;  // (U_bar - U_in) / max(1, |U_bar|)
  std::string action;
  double wall_ms = 0.0;
  bool scenario_added = false;
  int scenario_count = 0;
};

struct IterationState {
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  double final_gap = 0.0;
  double best_upper = 0.0;  // min over iterations of the certified U_bar
  int scenario_count = 0;
  std::vector<IterationRecord> records;
  std::vector<std::vector<OaTraceRow>> oracle_traces;  // one per iteration
};

struct CostBreakdown {
  double maintenance = 0.0;  // deviation penalties on maintenance starts
  double commitment = 0.0;   // startup plus no-load cost
  double dispatch = 0.0;     // fuel plus shedding / curtailment penalties
  double total = 0.0;
};

struct MaintenanceInterval {
  int unit_id = 0;
  int start = 0;  // 1-based, inclusive
  int end = 0;
};

struct RobustSolution {
  RunMode mode = RunMode::Iccg;
  std::vector<double> x;                       // first-stage vector
  std::vector<MaintenanceInterval> schedule;   // one entry per task
  std::vector<std::vector<double>> commitment;  // u[unit][t], snapped 0/1
  ScenarioRealization worst;   // certified worst-case realization
  std::vector<double> dispatch;  // recourse vector at the worst case
  CostBreakdown breakdown;       // evaluated exactly at `worst`
  double objective = 0.0;        // breakdown.total
  IterationState state;
};

// Splits total cost c'x + (b + L'x)'y + k'x by source.  `y` must be a
// feasible recourse vector for `x` (e.g. from evaluate_recourse).
CostBreakdown cost_breakdown(const MatrixForm& mf, const std::vector<double>& x,
                             const std::vector<double>& y);

RobustSolution run_iccg(const PowerSystem& sys, const SolverConfig& cfg);
RobustSolution run_ccg(const PowerSystem& sys, const SolverConfig& cfg);
RobustSolution run_deterministic(const PowerSystem& sys,
                                 const SolverConfig& cfg);
RobustSolution run_robust_decoupled(const PowerSystem& sys,
                                    const SolverConfig& cfg);

// Dispatches on cfg.mode.
RobustSolution run(const PowerSystem& sys, const SolverConfig& cfg);

// Renders the convergence log; the column set and order are part of the
// output contract relied on by downstream tooling.
std::string convergence_csv(const IterationState& state);

}  // namespace jumuc
