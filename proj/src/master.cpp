#include "jumuc/master.hpp"

#include "jumuc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "jumuc/mps_io.hpp"
#include "jumuc/tolerances.hpp"

namespace jumuc {

MasterModel init_master(const MatrixForm& mf, const PowerSystem& sys) {
  MasterModel m;
  m.mf = &mf;
  m.num_units = (int)sys.units.size();
  m.horizon = sys.horizon;
  for (const Unit& g : sys.units) {
    m.unit_pmax.push_back(g.p_max);
    m.unit_mc.push_back(g.marginal_cost);
  }

  LpModel& lp = m.model;
  lp.sense = ObjSense::Minimize;
  for (int j = 0; j < mf.dim_x(); ++j) {
    const bool is_tau = mf.x_index.ref(j).kind == "tau";
    lp.add_col(mf.c[j], 0.0, 1.0, !is_tau, mf.x_index.name(j));
  }
  m.col_alpha = lp.add_col(1.0, 0.0, kInf, false, "alpha_val");

  for (int r = 0; r < mf.A.nrows; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int p = mf.A.start[r]; p < mf.A.start[r + 1]; ++p)
      terms.emplace_back(mf.A.col[p], mf.A.val[p]);
    lp.add_row(terms, RowSense::Ge, mf.e[r]);
  }

  std::vector<std::pair<int, double>> lbar;
  for (int j = 0; j < mf.dim_x(); ++j)
    if (std::fabs(mf.c[j]) > tol::kZeroCoef) lbar.emplace_back(j, mf.c[j]);
  lbar.emplace_back(m.col_alpha, 1.0);
  m.row_lbar = lp.add_row(lbar, RowSense::Ge, 0.0, "objective_floor");
  return m;
}

bool has_scenario(const MasterModel& m, const std::vector<double>& v) {
  for (const auto& s : m.scenarios) {
    double diff = 0.0;
    for (size_t c = 0; c < v.size(); ++c)
      diff = std::max(diff, std::fabs(s[c] - v[c]));
    if (diff <= tol::kScenarioDedup) return true;
  }
  return false;
}

void add_scenario(MasterModel& m, const std::vector<double>& v) {
  const MatrixForm& mf = *m.mf;
  if ((int)v.size() != mf.dim_v())
    throw std::invalid_argument("add_scenario: v dimension mismatch");
  if (has_scenario(m, v))
    throw std::invalid_argument(
        "add_scenario: duplicate scenario (driver is stalled)");

  LpModel& lp = m.model;
  const int old_cols = lp.num_cols(), old_rows = lp.num_rows();
  const int s_id = (int)m.scenarios.size();
  ScenarioBlock blk;
  blk.y0 = lp.num_cols();
  const std::string tag = "_s" + std::to_string(s_id + 1);
  for (int j = 0; j < mf.dim_y(); ++j)
    lp.add_col(0.0, -kInf, kInf, false, mf.y_index.name(j) + tag);
  blk.eta.assign(m.num_units * m.horizon, -1);
  for (int g = 0; g < m.num_units; ++g)
    if (m.unit_mc[g] != 0.0)
      for (int t = 0; t < m.horizon; ++t)
        blk.eta[g * m.horizon + t] =
            lp.add_col(0.0, -kInf, kInf, false,
                       "eta[" + std::to_string(g + 1) + "," +
                           std::to_string(t + 1) + "]" + tag);

  blk.row0 = lp.num_rows();
  std::vector<double> Gv = mf.G.apply(v), Mv = mf.M.apply(v);
  for (int r = 0; r < mf.H.nrows; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int p = mf.E.start[r]; p < mf.E.start[r + 1]; ++p)
      terms.emplace_back(mf.E.col[p], mf.E.val[p]);
    for (int p = mf.H.start[r]; p < mf.H.start[r + 1]; ++p)
      terms.emplace_back(blk.y0 + mf.H.col[p], mf.H.val[p]);
    lp.add_row(terms, RowSense::Ge, mf.g[r] - Gv[r]);
  }
  for (int r = 0; r < mf.F.nrows; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int p = mf.F.start[r]; p < mf.F.start[r + 1]; ++p)
      terms.emplace_back(blk.y0 + mf.F.col[p], mf.F.val[p]);
    lp.add_row(terms, RowSense::Eq, mf.f[r] - Mv[r]);
  }

  // alpha_val >= b'y + sum_mc eta + k'x
  std::vector<std::pair<int, double>> epi{{m.col_alpha, 1.0}};
  for (int j = 0; j < mf.dim_y(); ++j)
    if (std::fabs(mf.b[j]) > tol::kZeroCoef)
      epi.emplace_back(blk.y0 + j, -mf.b[j]);
  for (int g = 0; g < m.num_units; ++g)
    for (int t = 0; t < m.horizon; ++t)
      if (blk.eta[g * m.horizon + t] >= 0)
        epi.emplace_back(blk.eta[g * m.horizon + t], -m.unit_mc[g]);
  for (int j = 0; j < mf.dim_x(); ++j)
    if (std::fabs(mf.k[j]) > tol::kZeroCoef) epi.emplace_back(j, -mf.k[j]);
  lp.add_row(epi, RowSense::Ge, 0.0, "epigraph" + tag);

  for (int g = 0; g < m.num_units; ++g) {
    const double M = m.unit_pmax[g];
    for (int t = 0; t < m.horizon; ++t) {
      const int e = blk.eta[g * m.horizon + t];
      if (e < 0) continue;
      const int u = mf.x_index.at("u", g, t);
      const int p = blk.y0 + mf.y_index.at("p", g, t);
      lp.add_row({{e, 1.0}, {p, -1.0}, {u, -M}}, RowSense::Ge, -M);
      lp.add_row({{e, -1.0}, {p, 1.0}, {u, -M}}, RowSense::Ge, -M);
      lp.add_row({{e, -1.0}, {u, M}}, RowSense::Ge, 0.0);
      lp.add_row({{e, 1.0}, {u, M}}, RowSense::Ge, 0.0);
      // exact at binary commitments (the off state forces p = 0 through the
      // output limits); at fractional u it removes the relaxation's free
      // half-committed output, which the plain envelope rows permit
      if (!std::getenv("JUMUC_NO_KROW")) lp.add_row({{e, 1.0}, {p, -2.0}, {u, M}}, RowSense::Ge, 0.0);
    }
  }
  blk.num_rows = lp.num_rows() - blk.row0;

  // splice the new block into the carried basis: columns nonbasic, row
  // slacks basic
  if (!m.warm.empty()) {
    std::vector<VarStatus> next(m.warm.begin(), m.warm.begin() + old_cols);
    for (int j = old_cols; j < lp.num_cols(); ++j)
      next.push_back(VarStatus::FreeNonbasic);
    next.insert(next.end(), m.warm.begin() + old_cols, m.warm.end());
    for (int r = old_rows; r < lp.num_rows(); ++r)
      next.push_back(VarStatus::Basic);
    m.warm = std::move(next);
  }
  m.scenarios.push_back(v);
  m.blocks.push_back(blk);
}

void fix_maintenance_at_reported(MasterModel& m, const PowerSystem& sys) {
  const MatrixForm& mf = *m.mf;
  for (int n = 0; n < (int)sys.maintenance.size(); ++n) {
    const MaintenanceTask& task = sys.maintenance[n];
    const int start = task.reported_start - 1;
    for (int t = 0; t < sys.horizon; ++t) {
      const bool st = (t == start);
      const bool on = (t >= start && t < start + task.duration);
      const int q = mf.x_index.at("q", n, t);
      const int mm = mf.x_index.at("m", n, t);
      m.model.lb[q] = m.model.ub[q] = st ? 1.0 : 0.0;
      m.model.lb[mm] = m.model.ub[mm] = on ? 1.0 : 0.0;
    }
  }
}

namespace {

// External MIP hook: `cmd model.mps solution.txt`, solution as
// "<column name> <value>" lines with optional =obj=/=bound= records.
MipSolution solve_external(const LpModel& model, const std::string& cmd) {
  char tmpl[] = "/tmp/jumuc_master_XXXXXX";
  if (!mkdtemp(tmpl))
    throw std::runtime_error("external solver: cannot create temp dir");
  const std::string dir = tmpl;
  const std::string mps = dir + "/model.mps";
  const std::string out = dir + "/solution.txt";
  export_standard_to_file(model, mps);
  const std::string full = cmd + " \"" + mps + "\" \"" + out + "\"";
  const int rc = std::system(full.c_str());
  if (rc != 0)
    throw std::runtime_error("external solver exited with status " +
                             std::to_string(rc));
  ImportedSolution imp = read_solution_vector(out, model);
  std::remove(mps.c_str());
  std::remove(out.c_str());
  std::remove(dir.c_str());

  MipSolution sol;
  sol.x = imp.x;
  double obj = model.obj_offset;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.integral[j] &&
        std::fabs(imp.x[j] - std::round(imp.x[j])) > tol::kIntegrality)
      throw std::runtime_error("external solver returned fractional value "
                               "for an integer column");
    obj += model.obj[j] * imp.x[j];
  }
  if (imp.objective &&
      std::fabs(*imp.objective - obj) >
          tol::kObjMatchRel * std::max(1.0, std::fabs(obj)))
    throw std::runtime_error("external solver objective does not match its "
                             "solution vector");
  sol.objective = obj;
  sol.best_bound = imp.bound ? *imp.bound : obj;
  sol.gap = std::fabs(sol.objective - sol.best_bound) /
            std::max(1.0, std::fabs(sol.objective));
  sol.status = SolveStatus::Optimal;
  sol.nodes = 0;
  return sol;
}

}  // namespace

MasterResult solve_master(MasterModel& m, double eps_mp, double L_bar,
                          const MipOptions& opts) {
  if (eps_mp < 0) throw std::invalid_argument("eps_mp must be >= 0");
  m.L_bar = L_bar;
  m.model.rhs[m.row_lbar] = L_bar;

  MipSolution mip;
  const char* ext = std::getenv("JUMUC_EXTERNAL_SOLVER");
  if (ext && *ext) {
    mip = solve_external(m.model, ext);
  } else {
    MipOptions mo = opts;
    mo.rel_gap = eps_mp;
    mip = solve_mip(m.model, mo, m.warm.empty() ? nullptr : &m.warm);
    if (!mip.root_basis.empty()) m.warm = mip.root_basis;
  }

  if (mip.status == SolveStatus::Infeasible) {
    std::vector<std::string> fams = diagnose_infeasible(m);
    std::ostringstream os;
    os << "master problem infeasible";
    if (!fams.empty()) {
      os << "; violated families:";
      for (const auto& f : fams) os << " " << f;
    }
    throw MasterInfeasible(os.str(), std::move(fams));
  }
  if (!mip.feasible() || mip.x.empty())
    throw std::runtime_error(std::string("master solve failed: ") +
                             to_string(mip.status));

  MasterResult res;
  res.mip = mip;
  res.U_in = mip.objective;
  res.L_in = std::max(mip.best_bound, L_bar);
  res.alpha = mip.x[m.col_alpha];

  const MatrixForm& mf = *m.mf;
  res.xhat.assign(mf.dim_x(), 0.0);
  for (int j = 0; j < mf.dim_x(); ++j)
    res.xhat[j] = m.model.integral[j] ? std::round(mip.x[j]) : mip.x[j];
  // re-derive startup indicators from the snapped commitment so they sit at
  // the linking minimum even when start-up costs are zero
  for (int j = 0; j < mf.dim_x(); ++j) {
    const VarRef& r = mf.x_index.ref(j);
    if (r.kind != "tau") continue;
    const double ut = res.xhat[mf.x_index.at("u", r.entity, r.period)];
    const double up =
        r.period > 0 ? res.xhat[mf.x_index.at("u", r.entity, r.period - 1)]
                     : 0.0;
    res.xhat[j] = std::max(0.0, ut - up);
  }
  return res;
}

std::vector<std::string> diagnose_infeasible(const MasterModel& m) {
  const MatrixForm& mf = *m.mf;
  LpModel relax = m.model;
  for (auto& f : relax.integral) f = 0;
  if (solve_lp(relax).status != SolveStatus::Infeasible) return {};

  std::vector<std::string> fams;
  for (const auto& f : mf.a_family)
    if (std::find(fams.begin(), fams.end(), f) == fams.end())
      fams.push_back(f);

  std::vector<std::string> out;
  for (const std::string& fam : fams) {
    LpModel probe = relax;
    // neutralize the family's rows by unbounding their right-hand sides
    for (int r = 0; r < mf.A.nrows; ++r)
      if (mf.a_family[r] == fam) probe.rhs[r] = -kInf;
    if (solve_lp(probe).status != SolveStatus::Infeasible) out.push_back(fam);
  }
  return out;
}

}  // namespace jumuc
