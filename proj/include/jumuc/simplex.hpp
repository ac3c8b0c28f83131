// Bounded-variable revised simplex with dual extraction.
//
// Factorization: sparse LU of the basis (refreshed periodically) with
// product-form eta updates in between. Pricing is full Dantzig with a Bland
// fallback once degeneracy stalls progress. Deterministic: all ties break on
// the smallest column index.
#pragma once

#include <functional>

#include "jumuc/lp_model.hpp"

namespace jumuc {

struct LpOptions {
  long iter_limit = 2'000'000;
  double time_limit_sec = 0.0;  // 0 = none
  // Invoked once per phase-2 iteration with (iter, primal_obj, dual_obj);
  // used by tests to watch weak duality along the path.
  std::function<void(long, double, double)> iterate_hook;
};

// warm basis: optional previous VarStatus vector of size cols+rows. An
// inconsistent warm basis silently falls back to the all-slack start.
LpSolution solve_lp(const LpModel& model, const LpOptions& opts = {},
                    const std::vector<VarStatus>* warm = nullptr);

// Residual checks for a solution claimed optimal; returns a human-readable
// list of violated certificates (empty = clean). Used heavily in tests.
std::vector<std::string> verify_lp_solution(const LpModel& model,
                                            const LpSolution& sol);

}  // namespace jumuc
