#include "jumuc/oa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jumuc/tolerances.hpp"

namespace jumuc {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double cut_value(const OaCut& cut, const std::vector<double>& v,
                 const std::vector<double>& lambda,
                 const std::vector<double>& mu) {
  return dot(cut.w, v) + dot(lambda, cut.Gv) + dot(mu, cut.Mv) - cut.base;
}

double bilinear_value(const MatrixForm& mf, const std::vector<double>& v,
                      const std::vector<double>& lambda,
                      const std::vector<double>& mu) {
  std::vector<double> w = mf.G.apply_transpose(lambda);
  std::vector<double> wm = mf.M.apply_transpose(mu);
  for (size_t c = 0; c < w.size(); ++c) w[c] += wm[c];
  return dot(w, v);
}

ScenarioRealization pick_initial_scenario(const UncertaintySet& set) {
  ScenarioRealization s = scenario_center(set);
  const int T = set.horizon();
  auto saturate = [T](std::vector<std::vector<double>>& vals,
                      const std::vector<std::vector<double>>& mean,
                      const std::vector<std::vector<double>>& half,
                      double gamma, double sign) {
    for (int t = 0; t < T; ++t) {
      std::vector<int> order;
      for (int i = 0; i < (int)mean.size(); ++i)
        if (half[i][t] > tol::kZeroCoef) order.push_back(i);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return mean[a][t] > mean[b][t];
      });
      double remaining = gamma;
      for (int i : order) {
        if (remaining <= 0.0) break;
        const double dev = std::min(1.0, remaining);
        vals[i][t] = mean[i][t] + sign * dev * half[i][t];
        remaining -= dev;
      }
    }
  };
  saturate(s.load, set.load_mean, set.load_half, set.gamma_load, +1.0);
  saturate(s.wind, set.wind_mean, set.wind_half, set.gamma_wind, -1.0);
  return s;
}

namespace {

// Column layout of the OA master LP and the deviation-lift bookkeeping.
struct MasterLayout {
  int nl = 0, nm = 0;          // lambda / mu counts
  std::vector<int> lifted;     // v columns with nonzero half-width
  std::vector<double> half;    // half-width per lifted column
  std::vector<double> mean;    // full-length v mean vector
  int col_beta = 0;            // xi+ block, xi- block, then beta
  int xi_plus(int idx) const { return nl + nm + idx; }
  int xi_minus(int idx) const { return nl + nm + (int)lifted.size() + idx; }
};

MasterLayout make_layout(const BilinearMaxProblem& bp) {
  const MatrixForm& mf = *bp.mf;
  MasterLayout lay;
  lay.nl = mf.H.nrows;
  lay.nm = mf.F.nrows;
  lay.mean.resize(mf.dim_v());
  for (int c = 0; c < mf.dim_v(); ++c) {
    const VarRef& r = mf.v_index.ref(c);
    const bool is_load = r.kind == "vload";
    const double mean = is_load ? bp.set.load_mean[r.entity][r.period]
                                : bp.set.wind_mean[r.entity][r.period];
    const double half = is_load ? bp.set.load_half[r.entity][r.period]
                                : bp.set.wind_half[r.entity][r.period];
    lay.mean[c] = mean;
    if (half > tol::kZeroCoef) {
      lay.lifted.push_back(c);
      lay.half.push_back(half);
    }
  }
  lay.col_beta = lay.nl + lay.nm + 2 * (int)lay.lifted.size();
  return lay;
}

LpModel make_master_base(const BilinearMaxProblem& bp,
                         const MasterLayout& lay) {
  const MatrixForm& mf = *bp.mf;
  LpModel lp;
  lp.sense = ObjSense::Maximize;
  lp.obj_offset = bp.constant;
  for (int r = 0; r < lay.nl; ++r) lp.add_col(bp.g_minus_Ex[r], 0.0, kInf);
  for (int r = 0; r < lay.nm; ++r) lp.add_col(mf.f[r], -kInf, kInf);
  for (size_t i = 0; i < 2 * lay.lifted.size(); ++i)
    lp.add_col(0.0, 0.0, 1.0);  // xi+ block then xi- block
  lp.add_col(1.0, -kInf, kInf);  // beta

  for (int j = 0; j < mf.dim_y(); ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int p = bp.Ht.start[j]; p < bp.Ht.start[j + 1]; ++p)
      terms.emplace_back(bp.Ht.col[p], bp.Ht.val[p]);
    for (int p = bp.Ft.start[j]; p < bp.Ft.start[j + 1]; ++p)
      terms.emplace_back(lay.nl + bp.Ft.col[p], bp.Ft.val[p]);
    lp.add_row(terms, RowSense::Eq, bp.dual_rhs[j]);
  }

  // per-period deviation budgets over the lifted entries
  const int T = bp.set.horizon();
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> ld, wd;
    for (size_t i = 0; i < lay.lifted.size(); ++i) {
      const VarRef& r = mf.v_index.ref(lay.lifted[i]);
      if (r.period != t) continue;
      auto& terms = (r.kind == "vload") ? ld : wd;
      terms.emplace_back(lay.xi_plus((int)i), 1.0);
      terms.emplace_back(lay.xi_minus((int)i), 1.0);
    }
    if (!ld.empty()) lp.add_row(ld, RowSense::Le, bp.set.gamma_load);
    if (!wd.empty()) lp.add_row(wd, RowSense::Le, bp.set.gamma_wind);
  }
  return lp;
}

void add_cut_row(LpModel& lp, const MasterLayout& lay, const OaCut& cut) {
  std::vector<std::pair<int, double>> terms;
  terms.emplace_back(lay.col_beta, 1.0);
  for (size_t i = 0; i < lay.lifted.size(); ++i) {
    const double wh = cut.w[lay.lifted[i]] * lay.half[i];
    if (std::fabs(wh) <= tol::kZeroCoef) continue;
    terms.emplace_back(lay.xi_plus((int)i), wh);
    terms.emplace_back(lay.xi_minus((int)i), -wh);
  }
  for (int r = 0; r < lay.nl; ++r)
    if (std::fabs(cut.Gv[r]) > tol::kZeroCoef)
      terms.emplace_back(r, cut.Gv[r]);
  for (int r = 0; r < lay.nm; ++r)
    if (std::fabs(cut.Mv[r]) > tol::kZeroCoef)
      terms.emplace_back(lay.nl + r, cut.Mv[r]);
  const double rhs =
      cut.base - std::inner_product(cut.w.begin(), cut.w.end(),
                                    lay.mean.begin(), 0.0);
  lp.add_row(terms, RowSense::Le, rhs);
}

// Reads the lifted deviations back out of the master solution, clamping away
// LP-tolerance noise so the scenario is a strict set member: each deviation
// is boxed to its half-width and each period is rescaled onto its budget.
std::vector<double> extract_v(const LpSolution& sol,
                              const BilinearMaxProblem& bp,
                              const MasterLayout& lay) {
  const MatrixForm& mf = *bp.mf;
  std::vector<double> xi(lay.lifted.size());
  for (size_t i = 0; i < lay.lifted.size(); ++i) {
    const double d =
        sol.x[lay.xi_plus((int)i)] - sol.x[lay.xi_minus((int)i)];
    xi[i] = std::clamp(d, -1.0, 1.0);
  }
  const int T = bp.set.horizon();
  for (int t = 0; t < T; ++t)
    for (int side = 0; side < 2; ++side) {
      const char* kind = side == 0 ? "vload" : "vwind";
      const double gamma = side == 0 ? bp.set.gamma_load : bp.set.gamma_wind;
      double used = 0.0;
      for (size_t i = 0; i < lay.lifted.size(); ++i) {
        const VarRef& r = mf.v_index.ref(lay.lifted[i]);
        if (r.period == t && r.kind == kind) used += std::fabs(xi[i]);
      }
      if (used <= gamma) continue;
      const double scale = gamma / used;
      for (size_t i = 0; i < lay.lifted.size(); ++i) {
        const VarRef& r = mf.v_index.ref(lay.lifted[i]);
        if (r.period == t && r.kind == kind) xi[i] *= scale;
      }
    }
  std::vector<double> v = lay.mean;
  for (size_t i = 0; i < lay.lifted.size(); ++i)
    v[lay.lifted[i]] += lay.half[i] * xi[i];
  return v;
}

}  // namespace

OaResult solve_worst_case(const BilinearMaxProblem& bp,
                          const ScenarioRealization& v0, double delta_oa,
                          int iter_cap) {
  if (delta_oa <= 0) throw std::invalid_argument("delta_oa must be > 0");
  const MatrixForm& mf = *bp.mf;
  if (!check_membership(bp.set, v0))
    throw std::invalid_argument("initial scenario outside the set");

  MasterLayout lay = make_layout(bp);
  LpModel master = make_master_base(bp, lay);
  std::vector<VarStatus> warm;

  OaResult out;
  OaState& st = out.state;
  st.tolerance = delta_oa;
  st.lower = 0.0;
  st.upper = kInf;

  std::vector<double> v_cur = scenario_to_vector(mf, v0);
  out.best_evaluated = v0;
  out.best_value = -kInf;

  for (int j = 1; j <= iter_cap; ++j) {
    st.iterations = j;
    DualSolution sub = solve_fixed_scenario_dual(bp, v_cur);
    if (sub.status != SolveStatus::Optimal)
      throw std::runtime_error(std::string("worst-case sub-problem LP: ") +
                               to_string(sub.status));
    if (sub.objective > out.best_value) {
      out.best_value = sub.objective;
      out.best_evaluated = vector_to_scenario(mf, v_cur);
    }
    st.lower = std::max(st.lower, sub.objective);

    OaCut cut;
    cut.j = j;
    cut.v = v_cur;
    cut.lambda = sub.lambda;
    cut.mu = sub.mu;
    cut.w = mf.G.apply_transpose(sub.lambda);
    std::vector<double> wm = mf.M.apply_transpose(sub.mu);
    for (size_t c = 0; c < cut.w.size(); ++c) cut.w[c] += wm[c];
    cut.Gv = mf.G.apply(v_cur);
    cut.Mv = mf.M.apply(v_cur);
    cut.base = dot(cut.w, v_cur);
    add_cut_row(master, lay, cut);
    st.cuts.push_back(cut);

    if (!warm.empty()) warm.push_back(VarStatus::Basic);  // new cut's slack
    LpSolution ms = solve_lp(master, {}, warm.empty() ? nullptr : &warm);
    if (ms.status != SolveStatus::Optimal)
      throw std::runtime_error(std::string("worst-case master LP: ") +
                               to_string(ms.status));
    warm = ms.basis;
    st.upper = std::min(st.upper, ms.objective);
    st.trace.push_back({j, st.lower, st.upper});

    v_cur = extract_v(ms, bp, lay);
    if (st.upper - st.lower < delta_oa * std::max(1.0, std::fabs(st.upper))) {
      st.converged = true;
      break;
    }
  }

  out.scenario = vector_to_scenario(mf, v_cur);
  out.upper_bound = std::max(st.upper, st.lower);
  return out;
}

}  // namespace jumuc
