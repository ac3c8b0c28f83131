// Outer solution loop: mode dispatch, convergence-log replay, bound
// monotonicity, mode orderings, and the cost breakdown identity.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "jumuc/driver.hpp"
#include "jumuc/duality.hpp"
#include "jumuc/system_model.hpp"

using namespace jumuc;

#ifndef JUMUC_CASE_DIR
#define JUMUC_CASE_DIR "cases"
#endif

namespace {

const std::string kTiny = std::string(JUMUC_CASE_DIR) + "/tiny3.case";
const std::string kSmall = std::string(JUMUC_CASE_DIR) + "/small5.case";

SolverConfig tight_config(RunMode mode, double gd, double gw) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.gamma_load = gd;
  cfg.gamma_wind = gw;
  cfg.error_fraction = 0.25;
  cfg.eps_mp = 0.0;      // exact masters: totals comparable at fine tolerance
  cfg.delta = 1e-7;
  cfg.delta_tilde = 5e-8;
  cfg.delta_oa = 1e-7;
  return cfg;
}

double rel_diff(double a, double b) {
  return std::fabs(a - b) / std::max(1.0, std::fabs(b));
}

}  // namespace

TEST_CASE("mode names round trip") {
  for (RunMode m : {RunMode::Iccg, RunMode::Ccg, RunMode::DeterministicJoint,
                    RunMode::DeterministicDecoupled, RunMode::RobustDecoupled})
    CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS(parse_mode("bogus"));
}

TEST_CASE("deterministic run reports a single exact iteration") {
  PowerSystem sys = load_case(kTiny);
  SolverConfig cfg = tight_config(RunMode::DeterministicJoint, 0.0, 0.0);
  RobustSolution sol = run(sys, cfg);
  CHECK(sol.state.converged);
  CHECK(sol.state.iterations == 1);
  REQUIRE(sol.state.records.size() == 1);
  CHECK(sol.state.records[0].action == "CONVERGED");
  CHECK(sol.state.scenario_count == 1);

  // schedule extraction matches the q columns
  REQUIRE(sol.schedule.size() == 1);
  CHECK(sol.schedule[0].unit_id == 2);
  CHECK(sol.schedule[0].end ==
        sol.schedule[0].start + sys.maintenance[0].duration - 1);
  REQUIRE(sol.commitment.size() == sys.units.size());
  for (const auto& row : sol.commitment) REQUIRE((int)row.size() == sys.horizon);
  // the maintained unit is down during its window
  CHECK(sol.commitment[1][sol.schedule[0].start - 1] == 0.0);
}

TEST_CASE("breakdown components add up and match the objective") {
  PowerSystem sys = load_case(kTiny);
  RobustSolution sol = run(sys, tight_config(RunMode::Iccg, 1.0, 1.0));
  const CostBreakdown& b = sol.breakdown;
  CHECK(b.total ==
        doctest::Approx(b.maintenance + b.commitment + b.dispatch)
            .epsilon(1e-9));
  CHECK(sol.objective == b.total);
  CHECK(b.maintenance >= 0.0);
  CHECK(b.commitment >= 0.0);
  CHECK(b.dispatch >= 0.0);
}

TEST_CASE("cost breakdown splits a hand-checkable plan") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.25, 0.0, 0.0);
  MatrixForm mf = assemble_matrix_form(sys, set);
  RobustSolution sol = run(sys, tight_config(RunMode::DeterministicJoint, 0, 0));
  RecourseResult rec = evaluate_recourse(mf, set, sol.x, scenario_center(set));
  CostBreakdown b = cost_breakdown(mf, sol.x, rec.lp.x);
  // maintenance = start cost of the chosen hour; commitment = no-load+startup
  double maint = 0.0, commit = 0.0;
  std::vector<double> cm =
      maintenance_cost_vector(sys.maintenance[0], sys.horizon);
  for (int t = 0; t < sys.horizon; ++t) {
    if (sol.x[mf.x_index.at("q", 0, t)] > 0.5) maint += cm[t];
    for (size_t g = 0; g < sys.units.size(); ++g) {
      if (sol.x[mf.x_index.at("u", (int)g, t)] > 0.5)
        commit += sys.units[g].no_load_cost;
      if (sol.x[mf.x_index.at("tau", (int)g, t)] > 0.5)
        commit += sys.units[g].startup_cost;
    }
  }
  CHECK(b.maintenance == doctest::Approx(maint).epsilon(1e-9));
  CHECK(b.commitment == doctest::Approx(commit).epsilon(1e-9));
  CHECK(b.total == doctest::Approx(maint + commit + b.dispatch).epsilon(1e-9));
}

TEST_CASE("worst case realization is certified inside the set") {
  PowerSystem sys = load_case(kTiny);
  SolverConfig cfg = tight_config(RunMode::Iccg, 1.0, 1.0);
  RobustSolution sol = run(sys, cfg);
  UncertaintySet set =
      build_uncertainty_set(sys, cfg.error_fraction, 1.0, 1.0);
  CHECK(check_membership(set, sol.worst));
  REQUIRE_FALSE(sol.dispatch.empty());
}

TEST_CASE("zero budget collapses the robust modes onto the deterministic one") {
  PowerSystem sys = load_case(kTiny);
  RobustSolution det = run(sys, tight_config(RunMode::DeterministicJoint, 0, 0));
  RobustSolution iccg = run(sys, tight_config(RunMode::Iccg, 0.0, 0.0));
  RobustSolution ccg = run(sys, tight_config(RunMode::Ccg, 0.0, 0.0));
  CHECK(rel_diff(iccg.objective, det.objective) <= 1e-6);
  CHECK(rel_diff(ccg.objective, det.objective) <= 1e-6);
}

TEST_CASE("exact and inexact variants agree at their tolerances") {
  PowerSystem sys = load_case(kTiny);
  SolverConfig iccg;
  iccg.mode = RunMode::Iccg;
  iccg.gamma_load = iccg.gamma_wind = 1.0;
  iccg.error_fraction = 0.25;
  SolverConfig ccg = iccg;
  ccg.mode = RunMode::Ccg;
  RobustSolution a = run(sys, iccg);
  RobustSolution c = run(sys, ccg);
  CHECK(a.state.converged);
  CHECK(c.state.converged);
  CHECK(rel_diff(a.objective, c.objective) <= 0.002);
}

TEST_CASE("convergence log replays its own branch conditions") {
  PowerSystem sys = load_case(kSmall);
  SolverConfig cfg;
  cfg.mode = RunMode::Iccg;
  cfg.gamma_load = 2.0;
  cfg.gamma_wind = 1.0;
  cfg.error_fraction = 0.15;
  RobustSolution sol = run(sys, cfg);
  REQUIRE_FALSE(sol.state.records.empty());

  double lbar = 0.0, eps = cfg.eps_mp;
  for (size_t i = 0; i < sol.state.records.size(); ++i) {
    const IterationRecord& r = sol.state.records[i];
    CAPTURE(i);
    // logged quantities are self-consistent
    CHECK(r.eps_mp == doctest::Approx(eps).epsilon(1e-12));
    CHECK(r.gap ==
          doctest::Approx((r.U_bar - r.L_in) /
                          std::max(1.0, std::fabs(r.U_bar)))
              .epsilon(1e-12));
    CHECK(r.inexact_gap ==
          doctest::Approx((r.U_bar - r.U_in) /
                          std::max(1.0, std::fabs(r.U_bar)))
              .epsilon(1e-12));
    // branch rule replay
    if (r.gap <= cfg.delta) {
      CHECK(r.action == "CONVERGED");
    } else if (r.inexact_gap < cfg.delta_tilde) {
      CHECK(r.action == "SHRINK_EPS");
      eps *= cfg.alpha_shrink;
    } else {
      CHECK(r.action == "ADD_SCENARIO");
    }
    // the running master floor never regresses
    CHECK(r.L_bar >= lbar - 1e-12);
    lbar = std::max(lbar, r.L_in);
    // logged bounds are ordered
    CHECK(r.L_in <= r.U_in + 1e-7 * std::max(1.0, std::fabs(r.U_in)));
  }
  if (sol.state.converged)
    CHECK(sol.state.records.back().action == "CONVERGED");

  // inner lower bounds are nondecreasing across iterations
  for (size_t i = 1; i < sol.state.records.size(); ++i)
    CHECK(sol.state.records[i].L_in >=
          sol.state.records[i - 1].L_in - 1e-9);
}

TEST_CASE("exact mode never shrinks and pins the master gap") {
  PowerSystem sys = load_case(kSmall);
  SolverConfig cfg;
  cfg.mode = RunMode::Ccg;
  cfg.gamma_load = 2.0;
  cfg.gamma_wind = 1.0;
  cfg.error_fraction = 0.15;
  RobustSolution sol = run(sys, cfg);
  for (const IterationRecord& r : sol.state.records) {
    CHECK(r.action != "SHRINK_EPS");
    CHECK(r.eps_mp == 1e-4);
  }
}

TEST_CASE("iteration cap stops an unconverged run cleanly") {
  PowerSystem sys = load_case(kSmall);
  SolverConfig cfg;
  cfg.mode = RunMode::Iccg;
  cfg.gamma_load = 3.0;
  cfg.gamma_wind = 2.0;
  cfg.error_fraction = 0.25;
  cfg.delta = 1e-16;  // unattainable
  cfg.delta_tilde = 1e-18;
  cfg.max_iterations = 2;
  RobustSolution sol = run(sys, cfg);
  CHECK_FALSE(sol.state.converged);
  CHECK(sol.state.iterations <= 2);
  CHECK(sol.state.stop_reason.find("iteration") != std::string::npos);
  // still returns a usable plan with a certified scenario
  CHECK_FALSE(sol.schedule.empty());
  CHECK(sol.objective > 0.0);
}

TEST_CASE("decoupled modes pin maintenance to the crew report") {
  PowerSystem sys = load_case(kSmall);
  RobustSolution det =
      run(sys, tight_config(RunMode::DeterministicDecoupled, 0, 0));
  RobustSolution rob = run(sys, tight_config(RunMode::RobustDecoupled, 2, 1));
  for (const RobustSolution* s : {&det, &rob}) {
    REQUIRE(s->schedule.size() == sys.maintenance.size());
    for (size_t n = 0; n < sys.maintenance.size(); ++n)
      CHECK(s->schedule[n].start == sys.maintenance[n].reported_start);
  }
}

TEST_CASE("joint optimization never loses to the decoupled plan") {
  PowerSystem sys = load_case(kSmall);
  const double gd = 0.2 * 4, gw = 0.2 * 2;  // a fifth of each population
  RobustSolution rj = run(sys, tight_config(RunMode::Iccg, gd, gw));
  RobustSolution rd = run(sys, tight_config(RunMode::RobustDecoupled, gd, gw));
  RobustSolution dj =
      run(sys, tight_config(RunMode::DeterministicJoint, 0, 0));
  RobustSolution dd =
      run(sys, tight_config(RunMode::DeterministicDecoupled, 0, 0));
  const double tol = 1e-6;
  CHECK(rj.objective <= rd.objective * (1 + tol));
  CHECK(dj.objective <= dd.objective * (1 + tol));
  CHECK(rj.objective >= dj.objective * (1 - tol));
  CHECK(rd.objective >= dd.objective * (1 - tol));
}

TEST_CASE("robust cost is nondecreasing in the budget") {
  PowerSystem sys = load_case(kTiny);
  double prev = -1.0;
  for (double g : {0.0, 1.0, 2.0}) {
    RobustSolution sol = run(sys, tight_config(RunMode::Iccg, g, std::min(g, 1.0)));
    CHECK(sol.objective >= prev - 1e-6 * std::max(1.0, sol.objective));
    prev = sol.objective;
  }
}

TEST_CASE("convergence log renders one row per iteration") {
  PowerSystem sys = load_case(kTiny);
  RobustSolution sol = run(sys, tight_config(RunMode::Iccg, 1.0, 1.0));
  std::string csv = convergence_csv(sol.state);
  std::istringstream in(csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header.find("iter") != std::string::npos);
  CHECK(header.find("action") != std::string::npos);
  const size_t cols = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CHECK(std::count(line.begin(), line.end(), ',') == (long)cols);
    ++rows;
  }
  CHECK(rows == (int)sol.state.records.size());
}
