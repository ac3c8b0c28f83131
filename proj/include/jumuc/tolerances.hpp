// Central numeric tolerances. Every module pulls from here so that a single
// change propagates consistently.
#pragma once

namespace jumuc::tol {

// LP / MIP core
inline constexpr double kPrimalFeas = 1e-7;   // max primal residual accepted as feasible
inline constexpr double kDualFeas = 1e-7;     // max dual residual accepted as optimal
inline constexpr double kComplSlack = 1e-6;   // complementary slackness residual
inline constexpr double kObjMatchRel = 1e-6;  // relative primal/dual objective agreement
inline constexpr double kIntegrality = 1e-6;  // distance from nearest integer
inline constexpr double kPivot = 1e-8;        // smallest acceptable simplex pivot
inline constexpr double kRatioTie = 1e-9;     // ratio-test tie window
inline constexpr double kZeroCoef = 1e-12;    // coefficients below this are dropped

// Model / set handling
inline constexpr double kMembership = 1e-9;   // uncertainty-set box and budget slack
inline constexpr double kScenarioDedup = 1e-9;// max-norm scenario deduplication
inline constexpr double kCutExact = 1e-9;     // linearization exactness at its iterate
inline constexpr double kCostBreakdownRel = 1e-6; // reported cost component consistency

}  // namespace jumuc::tol
