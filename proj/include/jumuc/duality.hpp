// Strong-duality reformulation of the second stage, exact primal recourse
// evaluation for fixed (x, v), and a vertex-enumeration worst-case oracle.
#pragma once

#include <string>
#include <vector>

#include "jumuc/formulation.hpp"
#include "jumuc/simplex.hpp"
#include "jumuc/system_model.hpp"

namespace jumuc {

// max over (lambda, mu) of
//   lambda'(g - E x - G v) + mu'(f - M v) + (c + k)'x
// s.t. H'lambda + F'mu = b + L'x,  lambda >= 0, mu free.
// With v fixed this is an LP; with (lambda, mu) fixed it is linear in v.
struct BilinearMaxProblem {
  const MatrixForm* mf = nullptr;
  UncertaintySet set;
  std::vector<double> xhat;
  std::vector<double> g_minus_Ex;  // per inequality row
  std::vector<double> dual_rhs;    // b + L'x, per y column
  double constant = 0.0;           // (c + k)'x
  Sparse Ht, Ft;                   // column views of H and F
};

Sparse transposed(const Sparse& s);

BilinearMaxProblem dualize(const MatrixForm& mf, const UncertaintySet& set,
                           const std::vector<double>& xhat);

struct DualSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;  // S(x, v): full first- plus second-stage cost
  std::vector<double> lambda, mu;
};

DualSolution solve_fixed_scenario_dual(const BilinearMaxProblem& bp,
                                       const std::vector<double>& v,
                                       const LpOptions& opts = {});

struct RecourseResult {
  double objective = 0.0;  // second-stage cost: (b + L'x)'y + k'x
  LpSolution lp;           // over the y columns of the MatrixForm
};

RecourseResult evaluate_recourse(const MatrixForm& mf,
                                 const UncertaintySet& set,
                                 const std::vector<double>& xhat,
                                 const ScenarioRealization& scen,
                                 const LpOptions& opts = {});

struct WorstCase {
  ScenarioRealization scenario;
  double objective = 0.0;  // total cost c'x + second-stage cost at scenario
  long long candidates = 0;
};

// Enumerates every per-period deviation pattern (each period independently
// picks which budgeted entities sit at +/- full deviation) and returns the
// costliest one. Budgets must be integral and the pattern count is capped.
WorstCase brute_force_worst_case(const MatrixForm& mf,
                                 const UncertaintySet& set,
                                 const std::vector<double>& xhat,
                                 long long max_candidates = 1000000);

// Residual check of the first-stage system A x >= e; returns the violated
// row families (empty when feasible).
std::vector<std::string> first_stage_violations(const MatrixForm& mf,
                                                const std::vector<double>& x);

}  // namespace jumuc
