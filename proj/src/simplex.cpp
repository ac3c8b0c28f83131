#include "jumuc/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "jumuc/tolerances.hpp"

namespace jumuc {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterLimit: return "iteration-limit";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::NodeLimit: return "node-limit";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

constexpr int kRefactorEvery = 64;
constexpr int kDegenerateStall = 600;  // consecutive zero-step pivots before Bland

struct Eta {
  int r;
  VectorXd alpha;
};

// Basis factorization: sparse LU refreshed periodically, product-form etas
// in between.
struct Factor {
  Eigen::SparseLU<SpMat> lu;
  std::vector<Eta> etas;
  bool ok = false;

  bool refactor(const SpMat& basis) {
    etas.clear();
    lu.compute(basis);
    ok = (lu.info() == Eigen::Success);
    return ok;
  }

  void ftran(VectorXd& v) const {
    v = lu.solve(v);
    for (const Eta& e : etas) {
      double t = v[e.r] / e.alpha[e.r];
      if (t != 0.0) {
        v.noalias() -= t * e.alpha;
      }
      v[e.r] = t;
    }
  }

  // Non-const: Eigen's SparseLU::transpose() view is a non-const accessor.
  void btran(VectorXd& v) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double d = (it->alpha.dot(v) - v[it->r]) / it->alpha[it->r];
      v[it->r] -= d;
    }
    v = lu.transpose().solve(v);
  }
};

class Simplex {
 public:
  Simplex(const LpModel& model, const LpOptions& opts,
          const std::vector<VarStatus>* warm)
      : M(model), opts_(opts) {
    n = M.num_cols();
    m = M.num_rows();
    N = n + m;
    build_columns();
    build_bounds();
    cost_.assign(n, 0.0);
    double flip = (M.sense == ObjSense::Maximize) ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) cost_[j] = flip * M.obj[j];
    cmax_ = 1.0;
    for (double c : cost_) cmax_ = std::max(cmax_, std::fabs(c));
    eps_rc_ = 1e-10 * cmax_;
    install_basis(warm);
  }

  LpSolution run() {
    LpSolution sol;
    start_ = std::chrono::steady_clock::now();
    if (!factorize()) {
      reset_to_slack_basis();
      if (!factorize()) {
        sol.status = SolveStatus::NumericalFailure;
        return sol;
      }
    }
    compute_basics();

    SolveStatus st = phase1();
    if (st == SolveStatus::Optimal) st = phase2();
    sol.status = st;
    sol.iterations = iter_;
    if (st != SolveStatus::Optimal && st != SolveStatus::IterLimit &&
        st != SolveStatus::TimeLimit) {
      if (st == SolveStatus::Infeasible || st == SolveStatus::Unbounded) {
        extract(sol);  // best-effort point for diagnostics
      }
      return sol;
    }
    extract(sol);
    return sol;
  }

 private:
  const LpModel& M;
  const LpOptions& opts_;
  int n = 0, m = 0, N = 0;

  // structural columns, CSC
  std::vector<int> cstart_, crow_;
  std::vector<double> cval_;

  std::vector<double> cost_;
  std::vector<double> lo_, hi_;
  std::vector<double> xv_;
  std::vector<VarStatus> stat_;
  std::vector<int> basic_;        // row -> column
  std::vector<int> basis_row_;    // column -> row, -1 if nonbasic
  Factor fac_;
  SpMat bmat_;
  long iter_ = 0;
  int pivots_since_refactor_ = 0;
  int degen_streak_ = 0;
  bool bland_ = false;
  double cmax_ = 1.0, eps_rc_ = 1e-10;
  std::chrono::steady_clock::time_point start_;

  void build_columns() {
    std::vector<int> count(n, 0);
    for (int i = 0; i < m; ++i)
      for (int k = M.row_start[i]; k < M.row_start[i + 1]; ++k)
        ++count[M.col_index[k]];
    cstart_.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) cstart_[j + 1] = cstart_[j] + count[j];
    crow_.resize(cstart_[n]);
    cval_.resize(cstart_[n]);
    std::vector<int> fill(cstart_.begin(), cstart_.end() - 1);
    for (int i = 0; i < m; ++i)
      for (int k = M.row_start[i]; k < M.row_start[i + 1]; ++k) {
        int j = M.col_index[k];
        crow_[fill[j]] = i;
        cval_[fill[j]] = M.value[k];
        ++fill[j];
      }
  }

  void build_bounds() {
    lo_.resize(N);
    hi_.resize(N);
    for (int j = 0; j < n; ++j) {
      lo_[j] = M.lb[j];
      hi_[j] = M.ub[j];
    }
    for (int i = 0; i < m; ++i) {
      switch (M.row_sense[i]) {
        case RowSense::Ge:
          lo_[n + i] = -kInf;
          hi_[n + i] = 0.0;
          break;
        case RowSense::Le:
          lo_[n + i] = 0.0;
          hi_[n + i] = kInf;
          break;
        case RowSense::Eq:
          lo_[n + i] = 0.0;
          hi_[n + i] = 0.0;
          break;
      }
    }
  }

  double nonbasic_start_value(int j) const {
    if (std::isfinite(lo_[j])) return lo_[j];
    if (std::isfinite(hi_[j])) return hi_[j];
    return 0.0;
  }

  void reset_to_slack_basis() {
    stat_.assign(N, VarStatus::AtLower);
    basic_.resize(m);
    basis_row_.assign(N, -1);
    xv_.assign(N, 0.0);
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(lo_[j])) {
        stat_[j] = VarStatus::AtLower;
        xv_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        stat_[j] = VarStatus::AtUpper;
        xv_[j] = hi_[j];
      } else {
        stat_[j] = VarStatus::FreeNonbasic;
        xv_[j] = 0.0;
      }
    }
    for (int i = 0; i < m; ++i) {
      stat_[n + i] = VarStatus::Basic;
      basic_[i] = n + i;
      basis_row_[n + i] = i;
    }
  }

  void install_basis(const std::vector<VarStatus>* warm) {
    if (!warm || static_cast<int>(warm->size()) != N) {
      reset_to_slack_basis();
      return;
    }
    int nb = 0;
    for (VarStatus s : *warm)
      if (s == VarStatus::Basic) ++nb;
    if (nb != m) {
      reset_to_slack_basis();
      return;
    }
    stat_ = *warm;
    basic_.clear();
    basis_row_.assign(N, -1);
    xv_.assign(N, 0.0);
    for (int j = 0; j < N; ++j) {
      if (stat_[j] == VarStatus::Basic) {
        basis_row_[j] = static_cast<int>(basic_.size());
        basic_.push_back(j);
      } else if (stat_[j] == VarStatus::AtLower) {
        xv_[j] = std::isfinite(lo_[j]) ? lo_[j] : nonbasic_start_value(j);
      } else if (stat_[j] == VarStatus::AtUpper) {
        xv_[j] = std::isfinite(hi_[j]) ? hi_[j] : nonbasic_start_value(j);
      } else {
        xv_[j] = 0.0;
      }
    }
  }

  void column(int j, VectorXd& out) const {
    out.setZero(m);
    if (j < n) {
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) out[crow_[k]] = cval_[k];
    } else {
      out[j - n] = 1.0;
    }
  }

  bool factorize() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(cstart_[n] + m);
    for (int i = 0; i < m; ++i) {
      int j = basic_[i];
      if (j < n) {
        for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
          trip.emplace_back(crow_[k], i, cval_[k]);
      } else {
        trip.emplace_back(j - n, i, 1.0);
      }
    }
    bmat_.resize(m, m);
    bmat_.setFromTriplets(trip.begin(), trip.end());
    pivots_since_refactor_ = 0;
    return fac_.refactor(bmat_);
  }

  void compute_basics() {
    VectorXd r(m);
    for (int i = 0; i < m; ++i) r[i] = M.rhs[i];
    for (int j = 0; j < N; ++j) {
      if (stat_[j] == VarStatus::Basic || xv_[j] == 0.0) continue;
      if (j < n) {
        for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
          r[crow_[k]] -= cval_[k] * xv_[j];
      } else {
        r[j - n] -= xv_[j];
      }
    }
    fac_.ftran(r);
    for (int i = 0; i < m; ++i) xv_[basic_[i]] = r[i];
  }

  double bound_eps(double b) const { return 1e-9 * (1.0 + std::fabs(b)); }

  // -1: below lower, +1: above upper, 0: inside
  int infeas_side(int j) const {
    if (std::isfinite(lo_[j]) && xv_[j] < lo_[j] - bound_eps(lo_[j])) return -1;
    if (std::isfinite(hi_[j]) && xv_[j] > hi_[j] + bound_eps(hi_[j])) return 1;
    return 0;
  }

  bool time_exceeded() const {
    if (opts_.time_limit_sec <= 0.0) return false;
    auto el = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start_)
                  .count();
    return el > opts_.time_limit_sec;
  }

  struct Ratio {
    double theta = kInf;
    int row = -1;          // leaving row, -1 = entering bound flip
    VarStatus leave_at = VarStatus::AtLower;
  };

  // Shared ratio test. phase1 allows infeasible basics to run to the bound
  // that restores feasibility; phase2 assumes all basics feasible.
  Ratio ratio_test(const VectorXd& alpha, int q, double sigma, bool phase1) {
    Ratio best;
    double best_pivot = 0.0;
    double flip_span = hi_[q] - lo_[q];
    if (std::isfinite(flip_span)) best = {flip_span, -1, VarStatus::AtLower};

    for (int i = 0; i < m; ++i) {
      double a = alpha[i];
      if (std::fabs(a) < tol::kPivot) continue;
      int v = basic_[i];
      double rate = -sigma * a;  // value motion of basic v per unit theta
      double target = kInf;
      VarStatus at = VarStatus::AtLower;
      if (rate < 0.0) {
        if (phase1 && infeas_side(v) > 0) {
          target = hi_[v];
          at = VarStatus::AtUpper;
        } else if (phase1 && infeas_side(v) < 0) {
          continue;  // moving deeper below lower: no finite block
        } else if (std::isfinite(lo_[v])) {
          target = lo_[v];
          at = VarStatus::AtLower;
        } else {
          continue;
        }
        double th = (xv_[v] - target) / (-rate);
        if (th < -1e-9) th = 0.0;
        consider(best, best_pivot, th, std::fabs(a), i, at, v);
      } else {
        if (phase1 && infeas_side(v) < 0) {
          target = lo_[v];
          at = VarStatus::AtLower;
        } else if (phase1 && infeas_side(v) > 0) {
          continue;
        } else if (std::isfinite(hi_[v])) {
          target = hi_[v];
          at = VarStatus::AtUpper;
        } else {
          continue;
        }
        double th = (target - xv_[v]) / rate;
        if (th < -1e-9) th = 0.0;
        consider(best, best_pivot, th, std::fabs(a), i, at, v);
      }
    }
    return best;
  }

  // Keep the smallest theta; within a tie window prefer the largest pivot,
  // then the smallest variable index (deterministic).
  void consider(Ratio& best, double& best_pivot, double th, double piv, int row,
                VarStatus at, int var) {
    if (!std::isfinite(best.theta)) {  // any finite block beats the sentinel
      best = {std::max(th, 0.0), row, at};
      best_pivot = piv;
      return;
    }
    double window = tol::kRatioTie * (1.0 + std::fabs(best.theta));
    if (th < best.theta - window) {
      best = {std::max(th, 0.0), row, at};
      best_pivot = piv;
      return;
    }
    if (th <= best.theta + window) {
      if (best.row == -1) return;  // bound flip wins ties: no basis change
      int cur = basic_[best.row];
      double piv_tie = 1e-12 * (1.0 + best_pivot);
      if (piv > best_pivot + piv_tie || (std::fabs(piv - best_pivot) <= piv_tie && var < cur)) {
        best = {std::max(th, 0.0), row, at};
        best_pivot = piv;
      }
    }
  }

  void apply_pivot(int q, double sigma, const VectorXd& alpha,
                   const Ratio& r) {
    if (r.row < 0) {  // bound flip
      double span = hi_[q] - lo_[q];
      for (int i = 0; i < m; ++i) {
        if (alpha[i] != 0.0) xv_[basic_[i]] -= sigma * span * alpha[i];
      }
      if (stat_[q] == VarStatus::AtLower) {
        stat_[q] = VarStatus::AtUpper;
        xv_[q] = hi_[q];
      } else {
        stat_[q] = VarStatus::AtLower;
        xv_[q] = lo_[q];
      }
      return;
    }
    double th = r.theta;
    for (int i = 0; i < m; ++i) {
      if (alpha[i] != 0.0) xv_[basic_[i]] -= sigma * th * alpha[i];
    }
    xv_[q] += sigma * th;
    int leave = basic_[r.row];
    stat_[leave] = r.leave_at;
    xv_[leave] = (r.leave_at == VarStatus::AtLower) ? lo_[leave] : hi_[leave];
    basis_row_[leave] = -1;
    stat_[q] = VarStatus::Basic;
    basic_[r.row] = q;
    basis_row_[q] = r.row;
    fac_.etas.push_back({r.row, alpha});
    if (++pivots_since_refactor_ >= kRefactorEvery) {
      if (!factorize()) throw std::runtime_error("simplex: basis refactor failed");
      compute_basics();
    }
    if (th > 1e-11) {
      degen_streak_ = 0;
      bland_ = false;
    } else if (++degen_streak_ > kDegenerateStall) {
      bland_ = true;
    }
  }

  bool eligible_entering(int j, double rc, double& sigma) const {
    if (lo_[j] == hi_[j]) return false;  // fixed column never moves
    switch (stat_[j]) {
      case VarStatus::AtLower:
        if (rc < -eps_rc_) {
          sigma = 1.0;
          return true;
        }
        return false;
      case VarStatus::AtUpper:
        if (rc > eps_rc_) {
          sigma = -1.0;
          return true;
        }
        return false;
      case VarStatus::FreeNonbasic:
        if (std::fabs(rc) > eps_rc_) {
          sigma = rc < 0 ? 1.0 : -1.0;
          return true;
        }
        return false;
      case VarStatus::Basic:
        return false;
    }
    return false;
  }

  double dot_column(int j, const VectorXd& y) const {
    if (j >= n) return y[j - n];
    double s = 0.0;
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) s += y[crow_[k]] * cval_[k];
    return s;
  }

  SolveStatus phase1() {
    while (true) {
      if (iter_ >= opts_.iter_limit) return SolveStatus::IterLimit;
      if ((iter_ & 0xff) == 0 && time_exceeded()) return SolveStatus::TimeLimit;

      VectorXd d = VectorXd::Zero(m);
      bool any_infeas = false;
      for (int i = 0; i < m; ++i) {
        int side = infeas_side(basic_[i]);
        if (side != 0) any_infeas = true;
        d[i] = side;
      }
      if (!any_infeas) return SolveStatus::Optimal;

      VectorXd y = d;
      fac_.btran(y);

      int q = -1;
      double sigma = 1.0, best = 0.0;
      for (int j = 0; j < N; ++j) {
        if (stat_[j] == VarStatus::Basic) continue;
        double rc = -dot_column(j, y);
        double sg;
        if (!eligible_entering(j, rc, sg)) continue;
        if (bland_) {
          q = j;
          sigma = sg;
          break;
        }
        if (std::fabs(rc) > best + 1e-12) {
          best = std::fabs(rc);
          q = j;
          sigma = sg;
        }
      }
      if (q < 0) return SolveStatus::Infeasible;

      VectorXd alpha(m);
      column(q, alpha);
      fac_.ftran(alpha);
      Ratio r = ratio_test(alpha, q, sigma, /*phase1=*/true);
      if (!std::isfinite(r.theta)) {
        // An improving phase-1 direction without a blocking bound cannot
        // reduce infeasibility below zero; treat as numerical trouble.
        if (!factorize()) return SolveStatus::NumericalFailure;
        compute_basics();
        if (++degen_streak_ > kDegenerateStall * 2)
          return SolveStatus::NumericalFailure;
        continue;
      }
      apply_pivot(q, sigma, alpha, r);
      ++iter_;
    }
  }

  double primal_objective() const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += cost_[j] * xv_[j];
    return s;
  }

  SolveStatus phase2() {
    while (true) {
      if (iter_ >= opts_.iter_limit) return SolveStatus::IterLimit;
      if ((iter_ & 0xff) == 0 && time_exceeded()) return SolveStatus::TimeLimit;

      VectorXd y(m);
      for (int i = 0; i < m; ++i) {
        int j = basic_[i];
        y[i] = (j < n) ? cost_[j] : 0.0;
      }
      fac_.btran(y);

      if (opts_.iterate_hook) {
        double pobj = primal_objective();
        double dobj = 0.0;
        for (int i = 0; i < m; ++i) dobj += y[i] * M.rhs[i];
        for (int j = 0; j < N; ++j) {
          if (stat_[j] == VarStatus::Basic || xv_[j] == 0.0) continue;
          double rc = ((j < n) ? cost_[j] : 0.0) - dot_column(j, y);
          dobj += rc * xv_[j];
        }
        opts_.iterate_hook(iter_, pobj, dobj);
      }

      int q = -1;
      double sigma = 1.0, best = 0.0;
      for (int j = 0; j < N; ++j) {
        if (stat_[j] == VarStatus::Basic) continue;
        double rc = ((j < n) ? cost_[j] : 0.0) - dot_column(j, y);
        double sg;
        if (!eligible_entering(j, rc, sg)) continue;
        if (bland_) {
          q = j;
          sigma = sg;
          break;
        }
        if (std::fabs(rc) > best + 1e-12) {
          best = std::fabs(rc);
          q = j;
          sigma = sg;
        }
      }
      if (q < 0) return SolveStatus::Optimal;

      VectorXd alpha(m);
      column(q, alpha);
      fac_.ftran(alpha);
      Ratio r = ratio_test(alpha, q, sigma, /*phase1=*/false);
      if (!std::isfinite(r.theta)) return SolveStatus::Unbounded;
      apply_pivot(q, sigma, alpha, r);

      // Infeasibility can sneak back through eta roundoff; repair promptly.
      if (pivots_since_refactor_ == 0) {
        for (int i = 0; i < m; ++i) {
          if (infeas_side(basic_[i]) != 0) {
            SolveStatus st = phase1();
            if (st != SolveStatus::Optimal) return st;
            break;
          }
        }
      }
      ++iter_;
    }
  }

  void extract(LpSolution& sol) {
    double flip = (M.sense == ObjSense::Maximize) ? -1.0 : 1.0;
    sol.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) sol.x[j] = xv_[j];
    sol.objective = M.obj_offset;
    for (int j = 0; j < n; ++j) sol.objective += M.obj[j] * xv_[j];

    VectorXd y(m);
    for (int i = 0; i < m; ++i) {
      int j = basic_[i];
      y[i] = (j < n) ? cost_[j] : 0.0;
    }
    fac_.btran(y);
    sol.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) sol.dual[i] = flip * y[i];
    sol.reduced_cost.assign(n, 0.0);
    for (int j = 0; j < n; ++j)
      sol.reduced_cost[j] = flip * (cost_[j] - dot_column(j, y));
    sol.basis = stat_;
  }
};

}  // namespace

LpSolution solve_lp(const LpModel& model, const LpOptions& opts,
                    const std::vector<VarStatus>* warm) {
  if (model.num_rows() == 0) {
    // No rows: each column sits at its best bound.
    LpSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.x.assign(model.num_cols(), 0.0);
    double flip = (model.sense == ObjSense::Maximize) ? -1.0 : 1.0;
    sol.objective = model.obj_offset;
    for (int j = 0; j < model.num_cols(); ++j) {
      double c = flip * model.obj[j];
      double v;
      if (c > 0) {
        v = model.lb[j];
      } else if (c < 0) {
        v = model.ub[j];
      } else {
        v = std::isfinite(model.lb[j]) ? model.lb[j]
            : std::isfinite(model.ub[j]) ? model.ub[j]
                                         : 0.0;
      }
      if (!std::isfinite(v)) {
        sol.status = SolveStatus::Unbounded;
        return sol;
      }
      sol.x[j] = v;
      sol.objective += model.obj[j] * v;
    }
    sol.reduced_cost.assign(model.num_cols(), 0.0);
    for (int j = 0; j < model.num_cols(); ++j)
      sol.reduced_cost[j] = model.obj[j];
    sol.basis.assign(model.num_cols(), VarStatus::AtLower);
    return sol;
  }
  Simplex s(model, opts, warm);
  return s.run();
}

std::vector<std::string> verify_lp_solution(const LpModel& model,
                                            const LpSolution& sol) {
  std::vector<std::string> bad;
  if (!sol.optimal()) {
    bad.push_back("solution not optimal");
    return bad;
  }
  int n = model.num_cols(), m = model.num_rows();
  auto note = [&](const std::string& s) { bad.push_back(s); };

  // Primal feasibility.
  std::vector<double> act(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int k = model.row_start[i]; k < model.row_start[i + 1]; ++k)
      act[i] += model.value[k] * sol.x[model.col_index[k]];
  for (int i = 0; i < m; ++i) {
    double scale = std::max(1.0, std::fabs(model.rhs[i]));
    double r = act[i] - model.rhs[i];
    bool viol = false;
    switch (model.row_sense[i]) {
      case RowSense::Ge: viol = r < -tol::kPrimalFeas * scale; break;
      case RowSense::Le: viol = r > tol::kPrimalFeas * scale; break;
      case RowSense::Eq: viol = std::fabs(r) > tol::kPrimalFeas * scale; break;
    }
    if (viol) note("primal residual on row " + std::to_string(i));
  }
  for (int j = 0; j < n; ++j) {
    double s = std::max({1.0, std::fabs(model.lb[j]), std::fabs(model.ub[j])});
    if (std::isfinite(model.lb[j]) && sol.x[j] < model.lb[j] - tol::kPrimalFeas * s)
      note("lower bound violated on col " + std::to_string(j));
    if (std::isfinite(model.ub[j]) && sol.x[j] > model.ub[j] + tol::kPrimalFeas * s)
      note("upper bound violated on col " + std::to_string(j));
  }

  // Dual feasibility (signs by sense, internal min convention adjusted).
  double flip = (model.sense == ObjSense::Maximize) ? -1.0 : 1.0;
  double cscale = 1.0;
  for (int j = 0; j < n; ++j) cscale = std::max(cscale, std::fabs(model.obj[j]));
  double dtol = tol::kDualFeas * cscale;
  for (int i = 0; i < m; ++i) {
    double y = flip * sol.dual[i];
    if (model.row_sense[i] == RowSense::Ge && y < -dtol)
      note("dual sign on >= row " + std::to_string(i));
    if (model.row_sense[i] == RowSense::Le && y > dtol)
      note("dual sign on <= row " + std::to_string(i));
  }
  // rc = c - A^T y must vanish for basic/interior columns and have the
  // correct sign at active bounds.
  std::vector<double> rc(n, 0.0);
  for (int j = 0; j < n; ++j) rc[j] = flip * model.obj[j];
  for (int i = 0; i < m; ++i)
    for (int k = model.row_start[i]; k < model.row_start[i + 1]; ++k)
      rc[model.col_index[k]] -= flip * sol.dual[i] * model.value[k];
  for (int j = 0; j < n; ++j) {
    double blo = std::isfinite(model.lb[j])
                     ? std::fabs(sol.x[j] - model.lb[j])
                     : kInf;
    double bhi = std::isfinite(model.ub[j])
                     ? std::fabs(sol.x[j] - model.ub[j])
                     : kInf;
    double snap = 1e-6 * std::max({1.0, std::fabs(model.lb[j]),
                                   std::fabs(model.ub[j])});
    bool at_lo = blo <= snap, at_hi = bhi <= snap;
    if (!at_lo && !at_hi && std::fabs(rc[j]) > dtol)
      note("nonzero reduced cost on interior col " + std::to_string(j));
    if (at_lo && !at_hi && rc[j] < -dtol)
      note("reduced cost sign at lower bound, col " + std::to_string(j));
    if (at_hi && !at_lo && rc[j] > dtol)
      note("reduced cost sign at upper bound, col " + std::to_string(j));
  }

  // Complementary slackness.
  for (int i = 0; i < m; ++i) {
    double slack = act[i] - model.rhs[i];
    double v = std::fabs(sol.dual[i] * slack);
    if (model.row_sense[i] != RowSense::Eq &&
        v > tol::kComplSlack * std::max(1.0, std::fabs(sol.objective)))
      note("complementary slackness on row " + std::to_string(i));
  }

  // Objective agreement with the dual value.
  double dual_obj = model.obj_offset;
  for (int i = 0; i < m; ++i) dual_obj += sol.dual[i] * model.rhs[i];
  for (int j = 0; j < n; ++j) {
    double blo = std::isfinite(model.lb[j]) ? std::fabs(sol.x[j] - model.lb[j])
                                            : kInf;
    double bhi = std::isfinite(model.ub[j]) ? std::fabs(sol.x[j] - model.ub[j])
                                            : kInf;
    if (blo <= bhi && std::isfinite(model.lb[j]))
      dual_obj += sol.reduced_cost[j] * model.lb[j];
    else if (std::isfinite(model.ub[j]))
      dual_obj += sol.reduced_cost[j] * model.ub[j];
    else
      dual_obj += sol.reduced_cost[j] * sol.x[j];
  }
  if (std::fabs(dual_obj - sol.objective) >
      tol::kObjMatchRel * std::max(1.0, std::fabs(sol.objective)))
    note("primal/dual objective mismatch");
  return bad;
}

}  // namespace jumuc
