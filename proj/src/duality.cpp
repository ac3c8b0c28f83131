#include "jumuc/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "jumuc/tolerances.hpp"

namespace jumuc {

Sparse transposed(const Sparse& s) {
  Sparse t;
  t.nrows = s.ncols;
  t.ncols = s.nrows;
  t.start.assign(s.ncols + 1, 0);
  for (int c : s.col) ++t.start[c + 1];
  for (int j = 0; j < s.ncols; ++j) t.start[j + 1] += t.start[j];
  t.col.resize(s.col.size());
  t.val.resize(s.val.size());
  std::vector<int> fill(t.start.begin(), t.start.end() - 1);
  for (int r = 0; r < s.nrows; ++r)
    for (int p = s.start[r]; p < s.start[r + 1]; ++p) {
      const int q = fill[s.col[p]]++;
      t.col[q] = r;
      t.val[q] = s.val[p];
    }
  return t;
}

std::vector<std::string> first_stage_violations(const MatrixForm& mf,
                                                const std::vector<double>& x) {
  std::vector<double> res = mf.A.apply(x);
  std::vector<std::string> out;
  for (int r = 0; r < mf.A.nrows; ++r)
    if (res[r] < mf.e[r] - tol::kPrimalFeas * (1.0 + std::fabs(mf.e[r])))
      if (std::find(out.begin(), out.end(), mf.a_family[r]) == out.end())
        out.push_back(mf.a_family[r]);
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  for (size_t i = 0; i < parts.size(); ++i) os << (i ? ", " : "") << parts[i];
  return os.str();
}

}  // namespace

BilinearMaxProblem dualize(const MatrixForm& mf, const UncertaintySet& set,
                           const std::vector<double>& xhat) {
  if ((int)xhat.size() != mf.dim_x())
    throw std::invalid_argument("dualize: x dimension mismatch");
  std::vector<std::string> bad = first_stage_violations(mf, xhat);
  if (!bad.empty())
    throw std::invalid_argument("dualize: first-stage infeasible x (" +
                                join(bad) + ")");
  BilinearMaxProblem bp;
  bp.mf = &mf;
  bp.set = set;
  bp.xhat = xhat;
  std::vector<double> Ex = mf.E.apply(xhat);
  bp.g_minus_Ex.resize(mf.g.size());
  for (size_t r = 0; r < mf.g.size(); ++r) bp.g_minus_Ex[r] = mf.g[r] - Ex[r];
  bp.dual_rhs = mf.L.apply_transpose(xhat);
  for (int j = 0; j < mf.dim_y(); ++j) bp.dual_rhs[j] += mf.b[j];
  bp.constant = dot(mf.c, xhat) + dot(mf.k, xhat);
  bp.Ht = transposed(mf.H);
  bp.Ft = transposed(mf.F);
  return bp;
}

DualSolution solve_fixed_scenario_dual(const BilinearMaxProblem& bp,
                                       const std::vector<double>& v,
                                       const LpOptions& opts) {
  const MatrixForm& mf = *bp.mf;
  const int nl = mf.H.nrows, nm = mf.F.nrows;
  std::vector<double> Gv = mf.G.apply(v), Mv = mf.M.apply(v);

  LpModel lp;
  lp.sense = ObjSense::Maximize;
  lp.obj_offset = bp.constant;
  for (int r = 0; r < nl; ++r)
    lp.add_col(bp.g_minus_Ex[r] - Gv[r], 0.0, kInf);
  for (int r = 0; r < nm; ++r) lp.add_col(mf.f[r] - Mv[r], -kInf, kInf);
  for (int j = 0; j < mf.dim_y(); ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int p = bp.Ht.start[j]; p < bp.Ht.start[j + 1]; ++p)
      terms.emplace_back(bp.Ht.col[p], bp.Ht.val[p]);
    for (int p = bp.Ft.start[j]; p < bp.Ft.start[j + 1]; ++p)
      terms.emplace_back(nl + bp.Ft.col[p], bp.Ft.val[p]);
    lp.add_row(terms, RowSense::Eq, bp.dual_rhs[j]);
  }

  LpSolution sol = solve_lp(lp, opts);
  DualSolution out;
  out.status = sol.status;
  if (sol.status == SolveStatus::Optimal) {
    out.objective = sol.objective;
    out.lambda.assign(sol.x.begin(), sol.x.begin() + nl);
    out.mu.assign(sol.x.begin() + nl, sol.x.begin() + nl + nm);
  }
  return out;
}

namespace {

LpModel make_recourse_model(const MatrixForm& mf,
                            const std::vector<double>& xhat) {
  LpModel lp;
  lp.sense = ObjSense::Minimize;
  std::vector<double> cost = mf.L.apply_transpose(xhat);
  for (int j = 0; j < mf.dim_y(); ++j)
    lp.add_col(cost[j] + mf.b[j], -kInf, kInf);
  lp.obj_offset = dot(mf.k, xhat);
  for (int r = 0; r < mf.H.nrows; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int p = mf.H.start[r]; p < mf.H.start[r + 1]; ++p)
      terms.emplace_back(mf.H.col[p], mf.H.val[p]);
    lp.add_row(terms, RowSense::Ge, 0.0);
  }
  for (int r = 0; r < mf.F.nrows; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int p = mf.F.start[r]; p < mf.F.start[r + 1]; ++p)
      terms.emplace_back(mf.F.col[p], mf.F.val[p]);
    lp.add_row(terms, RowSense::Eq, 0.0);
  }
  return lp;
}

void set_recourse_rhs(LpModel& lp, const MatrixForm& mf,
                      const std::vector<double>& Ex,
                      const std::vector<double>& v) {
  std::vector<double> Gv = mf.G.apply(v), Mv = mf.M.apply(v);
  for (int r = 0; r < mf.H.nrows; ++r) lp.rhs[r] = mf.g[r] - Ex[r] - Gv[r];
  for (int r = 0; r < mf.F.nrows; ++r)
    lp.rhs[mf.H.nrows + r] = mf.f[r] - Mv[r];
}

}  // namespace

RecourseResult evaluate_recourse(const MatrixForm& mf,
                                 const UncertaintySet& set,
                                 const std::vector<double>& xhat,
                                 const ScenarioRealization& scen,
                                 const LpOptions& opts) {
  std::vector<std::string> outside = membership_violations(set, scen);
  if (!outside.empty())
    throw std::invalid_argument("evaluate_recourse: scenario outside set (" +
                                join(outside) + ")");
  std::vector<std::string> bad = first_stage_violations(mf, xhat);
  if (!bad.empty())
    throw std::invalid_argument("evaluate_recourse: infeasible x (" +
                                join(bad) + ")");
  LpModel lp = make_recourse_model(mf, xhat);
  set_recourse_rhs(lp, mf, mf.E.apply(xhat), scenario_to_vector(mf, scen));
  RecourseResult out;
  out.lp = solve_lp(lp, opts);
  if (out.lp.status != SolveStatus::Optimal)
    throw std::logic_error(
        std::string("recourse LP not optimal (") + to_string(out.lp.status) +
        "): shedding and curtailment should keep it feasible");
  out.objective = out.lp.objective;
  return out;
}

namespace {

struct Pattern {
  std::vector<std::pair<int, int>> moves;  // (entity, +1/-1)
};

// Per-period vertex patterns of one side of the budget set: every subset of
// at most min(gamma, #active) deviating entities with all sign choices.
// Sub-budget subsets are vertices too and can dominate when a deviation
// direction lowers cost, so they must be enumerated.
std::vector<std::vector<Pattern>> side_patterns(
    const std::vector<std::vector<double>>& half, double gamma, int T) {
  const int N = (int)half.size();
  std::vector<std::vector<Pattern>> per_period(T);
  for (int t = 0; t < T; ++t) {
    std::vector<int> active;
    for (int i = 0; i < N; ++i)
      if (half[i][t] > tol::kZeroCoef) active.push_back(i);
    const int k = std::min<int>((int)std::lround(gamma), (int)active.size());
    std::vector<Pattern>& out = per_period[t];
    out.push_back({});  // no deviation
    for (int s = 1; s <= k; ++s) {
      std::vector<int> pick(s);
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        for (int signs = 0; signs < (1 << s); ++signs) {
          Pattern pat;
          for (int j = 0; j < s; ++j)
            pat.moves.emplace_back(active[pick[j]],
                                   (signs >> j) & 1 ? -1 : +1);
          out.push_back(std::move(pat));
        }
        int j = s - 1;
        while (j >= 0 && pick[j] == (int)active.size() - s + j) --j;
        if (j < 0) break;
        ++pick[j];
        for (int l = j + 1; l < s; ++l) pick[l] = pick[l - 1] + 1;
      }
    }
  }
  return per_period;
}

}  // namespace

WorstCase brute_force_worst_case(const MatrixForm& mf,
                                 const UncertaintySet& set,
                                 const std::vector<double>& xhat,
                                 long long max_candidates) {
  auto integral = [](double g) {
    return std::fabs(g - std::lround(g)) <= 1e-9;
  };
  if (!integral(set.gamma_load) || !integral(set.gamma_wind))
    throw std::invalid_argument("brute force oracle needs integral budgets");
  std::vector<std::string> bad = first_stage_violations(mf, xhat);
  if (!bad.empty())
    throw std::invalid_argument("brute_force_worst_case: infeasible x (" +
                                join(bad) + ")");

  const int T = set.horizon();
  auto load_pat = side_patterns(set.load_half, set.gamma_load, T);
  auto wind_pat = side_patterns(set.wind_half, set.gamma_wind, T);

  long long total = 1;
  for (int t = 0; t < T; ++t) {
    total *= (long long)load_pat[t].size() * (long long)wind_pat[t].size();
    if (total > max_candidates)
      throw std::invalid_argument("brute force enumeration exceeds " +
                                  std::to_string(max_candidates) +
                                  " candidates");
  }

  const std::vector<double> center = scenario_to_vector(
      mf, ScenarioRealization{set.load_mean, set.wind_mean});
  const std::vector<double> Ex = mf.E.apply(xhat);
  const double first_stage_cost = dot(mf.c, xhat);

  // decode candidate index -> v (period-major mixed radix, loads first)
  auto build_v = [&](long long idx) {
    std::vector<double> v = center;
    for (int t = 0; t < T; ++t) {
      const long long nl = (long long)load_pat[t].size();
      const Pattern& pl = load_pat[t][idx % nl];
      idx /= nl;
      for (auto [i, s] : pl.moves)
        v[mf.v_index.at("vload", i, t)] += s * set.load_half[i][t];
      const long long nw = (long long)wind_pat[t].size();
      const Pattern& pw = wind_pat[t][idx % nw];
      idx /= nw;
      for (auto [w, s] : pw.moves)
        v[mf.v_index.at("vwind", w, t)] += s * set.wind_half[w][t];
    }
    return v;
  };

  std::vector<double> objs((size_t)total);
  const int hw = (int)std::thread::hardware_concurrency();
  const int workers =
      std::max(1, std::min({hw > 0 ? hw : 1, 4, (int)std::min<long long>(
                                                    total, 4)}));
  auto run_range = [&](long long lo, long long hi) {
    LpModel lp = make_recourse_model(mf, xhat);
    LpSolution sol;
    for (long long i = lo; i < hi; ++i) {
      set_recourse_rhs(lp, mf, Ex, build_v(i));
      sol = solve_lp(lp, {}, sol.basis.empty() ? nullptr : &sol.basis);
      if (sol.status != SolveStatus::Optimal)
        throw std::logic_error("brute force recourse LP not optimal");
      objs[(size_t)i] = sol.objective;
    }
  };
  if (workers == 1) {
    run_range(0, total);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    const long long chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          run_range(w * chunk, std::min<long long>(total, (w + 1) * chunk));
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& err : errs)
      if (err) std::rethrow_exception(err);
  }

  long long arg = 0;
  for (long long i = 1; i < total; ++i)
    if (objs[(size_t)i] > objs[(size_t)arg]) arg = i;

  WorstCase out;
  out.scenario = vector_to_scenario(mf, build_v(arg));
  out.objective = first_stage_cost + objs[(size_t)arg];
  out.candidates = total;
  return out;
}

}  // namespace jumuc
