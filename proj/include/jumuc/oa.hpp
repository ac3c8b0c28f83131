// Outer-approximation loop for the bilinear worst-case problem: alternates
// a fixed-scenario dual LP with a cutting-plane master over (v, lambda, mu)
// until the two bounds close.
#pragma once

#include <vector>

#include "jumuc/duality.hpp"

namespace jumuc {

// Linearization of the bilinear form (G'lambda + M'mu) . v anchored at one
// iterate: L(v, lambda, mu) = w_j.v + lambda.Gv_j + mu.Mv_j - base, which
// reproduces the bilinear value exactly at the iterate itself.
struct OaCut {
  int j = 0;
  std::vector<double> v, lambda, mu;
  std::vector<double> w;       // G'lambda_j + M'mu_j
  std::vector<double> Gv, Mv;  // G v_j, M v_j
  double base = 0.0;           // w . v_j
};

double cut_value(const OaCut& cut, const std::vector<double>& v,
                 const std::vector<double>& lambda,
                 const std::vector<double>& mu);
double bilinear_value(const MatrixForm& mf, const std::vector<double>& v,
                      const std::vector<double>& lambda,
                      const std::vector<double>& mu);

struct OaTraceRow {
  int j = 0;
  double lower = 0.0, upper = 0.0;
};

struct OaState {
  double lower = 0.0;  // best evaluated fixed-scenario value so far
  double upper = 0.0;  // running minimum of master values
  int iterations = 0;
  double tolerance = 0.0;
  bool converged = false;
  std::vector<OaCut> cuts;
  std::vector<OaTraceRow> trace;
};

struct OaResult {
  ScenarioRealization scenario;        // final master iterate
  double upper_bound = 0.0;            // certified bound returned to driver
  ScenarioRealization best_evaluated;  // costliest exactly-evaluated scenario
  double best_value = 0.0;
  OaState state;
};

OaResult solve_worst_case(const BilinearMaxProblem& bp,
                          const ScenarioRealization& v0, double delta_oa,
                          int iter_cap = 100);

// Deterministic seed: per period, the highest-mean loads deviate up and the
// highest-mean wind farms deviate down until each budget is saturated
// (fractional budget remainder becomes a partial deviation).
ScenarioRealization pick_initial_scenario(const UncertaintySet& set);

}  // namespace jumuc
