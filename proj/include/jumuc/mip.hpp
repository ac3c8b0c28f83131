// Best-first branch-and-bound over the simplex core. Branching picks the
// most fractional integer column (ties: smallest index); child nodes warm
// start from the parent basis.
#pragma once

#include <functional>

#include "jumuc/lp_model.hpp"

namespace jumuc {

struct MipOptions {
  double rel_gap = 0.0;          // stop once |inc-bound|/max(1,|inc|) <= rel_gap
  long node_limit = 2'000'000;
  double time_limit_sec = 0.0;   // 0 = none
  long lp_iter_limit = 2'000'000;
  // Stable "iter, obj, bound, gap" progress lines; called on every incumbent
  // or bound improvement.
  std::function<void(long, double, double, double)> log_hook;
};

MipSolution solve_mip(const LpModel& model, const MipOptions& opts = {},
                      const std::vector<VarStatus>* warm = nullptr);

}  // namespace jumuc
