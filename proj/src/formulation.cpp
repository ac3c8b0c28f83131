#include "jumuc/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "jumuc/tolerances.hpp"

namespace jumuc {

std::string VariableIndex::key(const std::string& kind, int entity,
                               int period) {
  return kind + ":" + std::to_string(entity) + ":" + std::to_string(period);
}

int VariableIndex::add(const std::string& kind, int entity, int period) {
  auto [it, fresh] =
      lookup_.emplace(key(kind, entity, period), (int)refs_.size());
  if (!fresh)
    throw std::logic_error("duplicate variable " + kind + "[" +
                           std::to_string(entity) + "," +
                           std::to_string(period) + "]");
  refs_.push_back({kind, entity, period});
  return it->second;
}

int VariableIndex::at(const std::string& kind, int entity, int period) const {
  auto it = lookup_.find(key(kind, entity, period));
  if (it == lookup_.end())
    throw std::out_of_range("unknown variable " + kind + "[" +
                            std::to_string(entity) + "," +
                            std::to_string(period) + "]");
  return it->second;
}

bool VariableIndex::has(const std::string& kind, int entity,
                        int period) const {
  return lookup_.count(key(kind, entity, period)) > 0;
}

std::string VariableIndex::name(int flat) const {
  const VarRef& r = refs_[flat];
  return r.kind + "[" + std::to_string(r.entity + 1) + "," +
         std::to_string(r.period + 1) + "]";
}

void Sparse::add_row(const std::vector<std::pair<int, double>>& terms) {
  for (const auto& [c, a] : terms) {
    if (c < 0 || c >= ncols) throw std::out_of_range("sparse column");
    col.push_back(c);
    val.push_back(a);
  }
  start.push_back(static_cast<int>(col.size()));
  ++nrows;
}

std::vector<double> Sparse::apply(const std::vector<double>& x) const {
  if ((int)x.size() != ncols) throw std::invalid_argument("apply: dim");
  std::vector<double> y(nrows, 0.0);
  for (int r = 0; r < nrows; ++r)
    for (int p = start[r]; p < start[r + 1]; ++p) y[r] += val[p] * x[col[p]];
  return y;
}

std::vector<double> Sparse::apply_transpose(const std::vector<double>& x) const {
  if ((int)x.size() != nrows) throw std::invalid_argument("apply_transpose: dim");
  std::vector<double> y(ncols, 0.0);
  for (int r = 0; r < nrows; ++r)
    for (int p = start[r]; p < start[r + 1]; ++p) y[col[p]] += val[p] * x[r];
  return y;
}

double Sparse::row_dot(int r, const std::vector<double>& x) const {
  double s = 0.0;
  for (int p = start[r]; p < start[r + 1]; ++p) s += val[p] * x[col[p]];
  return s;
}

void ConstraintBlock::set_widths(int nx, int ny, int nv) {
  x.ncols = nx;
  y.ncols = ny;
  v.ncols = nv;
}

namespace {

std::vector<std::pair<int, double>> combine(
    const std::vector<std::pair<int, double>>& terms) {
  std::map<int, double> acc;
  for (const auto& [c, a] : terms) acc[c] += a;
  std::vector<std::pair<int, double>> out;
  for (const auto& [c, a] : acc)
    if (std::fabs(a) > tol::kZeroCoef) out.emplace_back(c, a);
  return out;
}

}  // namespace

void ConstraintBlock::add_row(const std::string& fam, RowSense s, double r,
                              const std::vector<std::pair<int, double>>& xt,
                              const std::vector<std::pair<int, double>>& yt,
                              const std::vector<std::pair<int, double>>& vt) {
  family.push_back(fam);
  sense.push_back(s);
  rhs.push_back(r);
  x.add_row(combine(xt));
  y.add_row(combine(yt));
  v.add_row(combine(vt));
}

void ConstraintBlock::append(const ConstraintBlock& other) {
  if (other.x.ncols != x.ncols || other.y.ncols != y.ncols ||
      other.v.ncols != v.ncols)
    throw std::logic_error("append: block widths differ");
  for (int r = 0; r < other.num_rows(); ++r) {
    std::vector<std::pair<int, double>> xt, yt, vt;
    for (int p = other.x.start[r]; p < other.x.start[r + 1]; ++p)
      xt.emplace_back(other.x.col[p], other.x.val[p]);
    for (int p = other.y.start[r]; p < other.y.start[r + 1]; ++p)
      yt.emplace_back(other.y.col[p], other.y.val[p]);
    for (int p = other.v.start[r]; p < other.v.start[r + 1]; ++p)
      vt.emplace_back(other.v.col[p], other.v.val[p]);
    add_row(other.family[r], other.sense[r], other.rhs[r], xt, yt, vt);
  }
}

VariableIndex make_x_index(const PowerSystem& sys) {
  VariableIndex ix;
  const int T = sys.horizon;
  const int NM = (int)sys.maintenance.size(), NG = (int)sys.units.size();
  for (int n = 0; n < NM; ++n)
    for (int t = 0; t < T; ++t) ix.add("q", n, t);
  for (int n = 0; n < NM; ++n)
    for (int t = 0; t < T; ++t) ix.add("m", n, t);
  for (int g = 0; g < NG; ++g)
    for (int t = 0; t < T; ++t) ix.add("u", g, t);
  for (int g = 0; g < NG; ++g)
    for (int t = 0; t < T; ++t) ix.add("tau", g, t);
  return ix;
}

VariableIndex make_y_index(const PowerSystem& sys) {
  VariableIndex iy;
  const int T = sys.horizon;
  for (int g = 0; g < (int)sys.units.size(); ++g)
    for (int t = 0; t < T; ++t) iy.add("p", g, t);
  for (int l = 0; l < (int)sys.lines.size(); ++l)
    for (int t = 0; t < T; ++t) iy.add("flow", l, t);
  for (int b = 0; b < (int)sys.buses.size(); ++b)
    for (int t = 0; t < T; ++t) iy.add("ang", b, t);
  for (int i = 0; i < (int)sys.loads.size(); ++i)
    for (int t = 0; t < T; ++t) iy.add("shed", i, t);
  for (int w = 0; w < (int)sys.wind.size(); ++w)
    for (int t = 0; t < T; ++t) iy.add("spill", w, t);
  return iy;
}

VariableIndex make_v_index(const PowerSystem& sys) {
  VariableIndex iv;
  const int T = sys.horizon;
  for (int i = 0; i < (int)sys.loads.size(); ++i)
    for (int t = 0; t < T; ++t) iv.add("vload", i, t);
  for (int w = 0; w < (int)sys.wind.size(); ++w)
    for (int t = 0; t < T; ++t) iv.add("vwind", w, t);
  return iv;
}

ConstraintBlock build_maintenance_block(const PowerSystem& sys) {
  const int T = sys.horizon;
  VariableIndex ix = make_x_index(sys);
  ConstraintBlock blk;
  blk.set_widths(ix.size(), make_y_index(sys).size(), make_v_index(sys).size());

  for (int n = 0; n < (int)sys.maintenance.size(); ++n) {
    const int S = sys.maintenance[n].duration;
    auto q = [&](int t) { return ix.at("q", n, t); };
    auto m = [&](int t) { return ix.at("m", n, t); };

    // start indicator covers every rise of the status variable
    blk.add_row("maintenance_start_link", RowSense::Ge, 0.0,
                {{q(0), 1.0}, {m(0), -1.0}});
    for (int t = 1; t < T; ++t)
      blk.add_row("maintenance_start_link", RowSense::Ge, 0.0,
                  {{q(t), 1.0}, {m(t), -1.0}, {m(t - 1), 1.0}});

    // once started, the status stays up for the full duration
    if (S <= T)
      blk.add_row("maintenance_continuity", RowSense::Ge, 0.0,
                  {{m(S - 1), 1.0}, {m(0), -1.0}});
    for (int t = 1; t < T + 1 - S; ++t)
      blk.add_row("maintenance_continuity", RowSense::Ge, 0.0,
                  {{m(t - 1 + S), 1.0}, {m(t), -1.0}, {m(t - 1), 1.0}});

    std::vector<std::pair<int, double>> sum_m, sum_q;
    for (int t = 0; t < T; ++t) {
      sum_m.emplace_back(m(t), 1.0);
      sum_q.emplace_back(q(t), 1.0);
    }
    blk.add_row("maintenance_duration", RowSense::Eq, (double)S, sum_m);
    blk.add_row("maintenance_duration", RowSense::Eq, 1.0, sum_q);
    // starts whose outage would run past the horizon are pinned to zero
    for (int t = T - S + 1; t < T; ++t)
      blk.add_row("maintenance_duration", RowSense::Le, 0.0, {{q(t), 1.0}});
  }

  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> terms;
    for (int n = 0; n < (int)sys.maintenance.size(); ++n)
      terms.emplace_back(ix.at("m", n, t), 1.0);
    blk.add_row("maintenance_resource_budget", RowSense::Le,
                sys.resource_budget[t], terms);
  }
  return blk;
}

ConstraintBlock build_commitment_block(const PowerSystem& sys,
                                       const UncertaintySet& set) {
  const int T = sys.horizon;
  VariableIndex ix = make_x_index(sys);
  ConstraintBlock blk;
  blk.set_widths(ix.size(), make_y_index(sys).size(), make_v_index(sys).size());

  for (int g = 0; g < (int)sys.units.size(); ++g) {
    auto u = [&](int t) { return ix.at("u", g, t); };
    // post-shutdown off-window, truncated at the horizon end
    for (int t = 1; t < T; ++t) {
      const int W = std::min(sys.units[g].min_up, T - t);
      std::vector<std::pair<int, double>> terms{{u(t - 1), -(double)W},
                                                {u(t), (double)W}};
      for (int k = t; k < t + W; ++k) terms.emplace_back(u(k), -1.0);
      blk.add_row("min_downtime", RowSense::Ge, -(double)W, terms);
    }
    // post-startup on-window, truncated at the horizon end
    for (int t = 1; t < T; ++t) {
      const int W = std::min(sys.units[g].min_down, T - t);
      std::vector<std::pair<int, double>> terms{{u(t - 1), (double)W},
                                                {u(t), -(double)W}};
      for (int k = t; k < t + W; ++k) terms.emplace_back(u(k), 1.0);
      blk.add_row("min_uptime", RowSense::Ge, 0.0, terms);
    }
  }

  for (int t = 0; t < T; ++t) {
    double net = 0.0;
    for (const auto& mean : set.load_mean) net += mean[t];
    for (const auto& mean : set.wind_mean) net -= mean[t];
    std::vector<std::pair<int, double>> terms;
    for (int g = 0; g < (int)sys.units.size(); ++g)
      terms.emplace_back(ix.at("u", g, t), sys.units[g].p_max);
    blk.add_row("reserve_requirement", RowSense::Ge, sys.reserve_rate * net,
                terms);
  }

  for (int g = 0; g < (int)sys.units.size(); ++g) {
    auto u = [&](int t) { return ix.at("u", g, t); };
    auto tau = [&](int t) { return ix.at("tau", g, t); };
    blk.add_row("startup_link", RowSense::Ge, 0.0,
                {{tau(0), 1.0}, {u(0), -1.0}});
    for (int t = 1; t < T; ++t)
      blk.add_row("startup_link", RowSense::Ge, 0.0,
                  {{tau(t), 1.0}, {u(t), -1.0}, {u(t - 1), 1.0}});
  }

  for (int n = 0; n < (int)sys.maintenance.size(); ++n) {
    const int g = sys.unit_index(sys.maintenance[n].unit);
    for (int t = 0; t < T; ++t)
      blk.add_row("maintenance_offline", RowSense::Le, 1.0,
                  {{ix.at("u", g, t), 1.0}, {ix.at("m", n, t), 1.0}});
  }
  return blk;
}

std::pair<ConstraintBlock, ConstraintBlock> build_dispatch_block(
    const PowerSystem& sys) {
  const int T = sys.horizon;
  VariableIndex ix = make_x_index(sys);
  VariableIndex iy = make_y_index(sys);
  VariableIndex iv = make_v_index(sys);
  ConstraintBlock iq, eq;
  iq.set_widths(ix.size(), iy.size(), iv.size());
  eq.set_widths(ix.size(), iy.size(), iv.size());

  for (int g = 0; g < (int)sys.units.size(); ++g) {
    const Unit& un = sys.units[g];
    auto u = [&](int t) { return ix.at("u", g, t); };
    auto p = [&](int t) { return iy.at("p", g, t); };
    for (int t = 0; t < T; ++t) {
      iq.add_row("output_limits", RowSense::Ge, 0.0, {{u(t), -un.p_min}},
                 {{p(t), 1.0}});
      iq.add_row("output_limits", RowSense::Le, 0.0, {{u(t), -un.p_max}},
                 {{p(t), 1.0}});
    }
    iq.add_row("ramp_limits", RowSense::Le, un.startup_ramp, {},
               {{p(0), 1.0}});
    for (int t = 1; t < T; ++t) {
      iq.add_row("ramp_limits", RowSense::Le, un.startup_ramp,
                 {{u(t - 1), -(un.ramp_up - un.startup_ramp)}},
                 {{p(t), 1.0}, {p(t - 1), -1.0}});
      iq.add_row("ramp_limits", RowSense::Le, un.shutdown_ramp,
                 {{u(t), -(un.ramp_down - un.shutdown_ramp)}},
                 {{p(t), -1.0}, {p(t - 1), 1.0}});
    }
  }

  for (int l = 0; l < (int)sys.lines.size(); ++l)
    for (int t = 0; t < T; ++t) {
      const int fl = iy.at("flow", l, t);
      iq.add_row("flow_limits", RowSense::Le, sys.lines[l].capacity, {},
                 {{fl, 1.0}});
      iq.add_row("flow_limits", RowSense::Ge, -sys.lines[l].capacity, {},
                 {{fl, 1.0}});
    }

  // bus angles are carried as 100 * radians so that, with reactance in p.u.
  // on a 100 MVA base, flows come out directly in MW
  for (int b = 0; b < (int)sys.buses.size(); ++b)
    for (int t = 0; t < T; ++t) {
      const int a = iy.at("ang", b, t);
      const double lim = 100.0 * sys.buses[b].angle_limit;
      iq.add_row("angle_limits", RowSense::Le, lim, {}, {{a, 1.0}});
      iq.add_row("angle_limits", RowSense::Ge, -lim, {}, {{a, 1.0}});
    }

  for (int i = 0; i < (int)sys.loads.size(); ++i)
    for (int t = 0; t < T; ++t) {
      const int d = iy.at("shed", i, t);
      iq.add_row("shed_limits", RowSense::Ge, 0.0, {}, {{d, 1.0}});
      iq.add_row("shed_limits", RowSense::Le, 0.0, {}, {{d, 1.0}},
                 {{iv.at("vload", i, t), -1.0}});
    }
  for (int w = 0; w < (int)sys.wind.size(); ++w)
    for (int t = 0; t < T; ++t) {
      const int s = iy.at("spill", w, t);
      iq.add_row("curtail_limits", RowSense::Ge, 0.0, {}, {{s, 1.0}});
      iq.add_row("curtail_limits", RowSense::Le, 0.0, {}, {{s, 1.0}},
                 {{iv.at("vwind", w, t), -1.0}});
    }

  for (int l = 0; l < (int)sys.lines.size(); ++l) {
    const int o = sys.bus_index(sys.lines[l].from);
    const int d = sys.bus_index(sys.lines[l].to);
    for (int t = 0; t < T; ++t)
      eq.add_row("dc_flow", RowSense::Eq, 0.0, {},
                 {{iy.at("flow", l, t), sys.lines[l].reactance},
                  {iy.at("ang", o, t), -1.0},
                  {iy.at("ang", d, t), 1.0}});
  }

  for (int b = 0; b < (int)sys.buses.size(); ++b) {
    const int bus_id = sys.buses[b].id;
    for (int t = 0; t < T; ++t) {
      std::vector<std::pair<int, double>> yt, vt;
      for (int g = 0; g < (int)sys.units.size(); ++g)
        if (sys.units[g].bus == bus_id) yt.emplace_back(iy.at("p", g, t), 1.0);
      for (int w = 0; w < (int)sys.wind.size(); ++w)
        if (sys.wind[w].bus == bus_id) {
          yt.emplace_back(iy.at("spill", w, t), -1.0);
          vt.emplace_back(iv.at("vwind", w, t), 1.0);
        }
      for (int i = 0; i < (int)sys.loads.size(); ++i)
        if (sys.loads[i].bus == bus_id) {
          yt.emplace_back(iy.at("shed", i, t), 1.0);
          vt.emplace_back(iv.at("vload", i, t), -1.0);
        }
      for (int l = 0; l < (int)sys.lines.size(); ++l) {
        if (sys.lines[l].from == bus_id)
          yt.emplace_back(iy.at("flow", l, t), -1.0);
        if (sys.lines[l].to == bus_id)
          yt.emplace_back(iy.at("flow", l, t), 1.0);
      }
      eq.add_row("nodal_balance", RowSense::Eq, 0.0, {}, yt, vt);
    }
  }
  return {std::move(iq), std::move(eq)};
}

std::vector<double> maintenance_cost_vector(const MaintenanceTask& task,
                                            int T) {
  std::vector<double> cost(T, std::numeric_limits<double>::infinity());
  for (int t = 1; t + task.duration - 1 <= T; ++t)
    cost[t - 1] = task.initial_cost +
                  task.deviation_penalty * std::abs(t - task.reported_start);
  return cost;
}

namespace {

// Flip <= rows, split equalities into a >=-pair, and scatter the (x, y, v)
// coefficient segments into the destination blocks.
void normalize_rows(const ConstraintBlock& blk,
                    const std::vector<Sparse*>& dests,
                    std::vector<double>& rhs_out,
                    std::vector<std::string>& fam_out, bool allow_eq) {
  const std::vector<const Sparse*> srcs{&blk.x, &blk.y, &blk.v};
  auto emit = [&](int r, double sgn) {
    for (size_t s = 0; s < srcs.size(); ++s) {
      std::vector<std::pair<int, double>> terms;
      for (int p = srcs[s]->start[r]; p < srcs[s]->start[r + 1]; ++p)
        terms.emplace_back(srcs[s]->col[p], sgn * srcs[s]->val[p]);
      dests[s]->add_row(terms);
    }
    rhs_out.push_back(sgn * blk.rhs[r]);
    fam_out.push_back(blk.family[r]);
  };
  for (int r = 0; r < blk.num_rows(); ++r) {
    switch (blk.sense[r]) {
      case RowSense::Ge:
        emit(r, 1.0);
        break;
      case RowSense::Le:
        emit(r, -1.0);
        break;
      case RowSense::Eq:
        if (!allow_eq) {
          emit(r, 1.0);
          emit(r, -1.0);
        } else {
          emit(r, 1.0);
        }
        break;
    }
  }
}

}  // namespace

MatrixForm assemble_matrix_form(const PowerSystem& sys,
                                const UncertaintySet& set) {
  MatrixForm mf;
  mf.x_index = make_x_index(sys);
  mf.y_index = make_y_index(sys);
  mf.v_index = make_v_index(sys);
  const int nx = mf.dim_x(), ny = mf.dim_y(), nv = mf.dim_v();

  ConstraintBlock first = build_maintenance_block(sys);
  first.append(build_commitment_block(sys, set));
  auto [disp_iq, disp_eq] = build_dispatch_block(sys);

  mf.A.ncols = nx;
  mf.E.ncols = nx;
  mf.H.ncols = ny;
  mf.G.ncols = nv;
  mf.F.ncols = ny;
  mf.M.ncols = nv;

  {
    Sparse drop_y, drop_v;
    drop_y.ncols = ny;
    drop_v.ncols = nv;
    normalize_rows(first, {&mf.A, &drop_y, &drop_v}, mf.e, mf.a_family, false);
    if (drop_y.col.size() || drop_v.col.size())
      throw std::logic_error("first-stage rows touch second-stage columns");
  }
  {
    normalize_rows(disp_iq, {&mf.E, &mf.H, &mf.G}, mf.g, mf.ineq_family, false);
    Sparse ex;
    ex.ncols = nx;
    normalize_rows(disp_eq, {&ex, &mf.F, &mf.M}, mf.f, mf.eq_family, true);
    if (!ex.col.empty())
      throw std::logic_error("equality rows touch first-stage columns");
  }

  mf.c.assign(nx, 0.0);
  mf.k.assign(nx, 0.0);
  const int T = sys.horizon;
  for (int n = 0; n < (int)sys.maintenance.size(); ++n) {
    std::vector<double> cm = maintenance_cost_vector(sys.maintenance[n], T);
    for (int t = 0; t < T; ++t)
      if (std::isfinite(cm[t]))
        mf.c[mf.x_index.at("q", n, t)] = cm[t];
  }
  for (int g = 0; g < (int)sys.units.size(); ++g)
    for (int t = 0; t < T; ++t) {
      mf.c[mf.x_index.at("u", g, t)] = sys.units[g].no_load_cost;
      mf.c[mf.x_index.at("tau", g, t)] = sys.units[g].startup_cost;
      mf.k[mf.x_index.at("u", g, t)] -=
          sys.units[g].marginal_cost * sys.units[g].p_min;
    }

  mf.b.assign(ny, 0.0);
  for (int i = 0; i < (int)sys.loads.size(); ++i)
    for (int t = 0; t < T; ++t)
      mf.b[mf.y_index.at("shed", i, t)] = sys.shed_penalty;
  for (int w = 0; w < (int)sys.wind.size(); ++w)
    for (int t = 0; t < T; ++t)
      mf.b[mf.y_index.at("spill", w, t)] = sys.curtail_penalty;

  // bilinear u*p marginal-cost coupling, one row of L per x column
  mf.L.ncols = ny;
  for (int j = 0; j < nx; ++j) {
    const VarRef& r = mf.x_index.ref(j);
    std::vector<std::pair<int, double>> terms;
    if (r.kind == "u" && sys.units[r.entity].marginal_cost != 0.0)
      terms.emplace_back(mf.y_index.at("p", r.entity, r.period),
                         sys.units[r.entity].marginal_cost);
    mf.L.add_row(terms);
  }

  if (mf.E.nrows != mf.H.nrows || mf.H.nrows != mf.G.nrows ||
      mf.F.nrows != mf.M.nrows || (int)mf.g.size() != mf.H.nrows ||
      (int)mf.f.size() != mf.F.nrows || (int)mf.e.size() != mf.A.nrows ||
      mf.L.nrows != nx)
    throw std::logic_error("matrix form dimension inconsistency");
  return mf;
}

std::vector<double> scenario_to_vector(const MatrixForm& mf,
                                       const ScenarioRealization& s) {
  std::vector<double> v(mf.dim_v(), 0.0);
  for (int j = 0; j < mf.dim_v(); ++j) {
    const VarRef& r = mf.v_index.ref(j);
    v[j] = (r.kind == "vload") ? s.load[r.entity][r.period]
                               : s.wind[r.entity][r.period];
  }
  return v;
}

ScenarioRealization vector_to_scenario(const MatrixForm& mf,
                                       const std::vector<double>& v) {
  ScenarioRealization s;
  for (int j = 0; j < mf.dim_v(); ++j) {
    const VarRef& r = mf.v_index.ref(j);
    auto& side = (r.kind == "vload") ? s.load : s.wind;
    if ((int)side.size() <= r.entity) side.resize(r.entity + 1);
    if ((int)side[r.entity].size() <= r.period)
      side[r.entity].resize(r.period + 1, 0.0);
    side[r.entity][r.period] = v[j];
  }
  return s;
}

std::string dump_block(const ConstraintBlock& blk, const VariableIndex& x,
                       const VariableIndex& y, const VariableIndex& v) {
  std::ostringstream os;
  const char* sense_str[] = {">=", "<=", "="};
  for (int r = 0; r < blk.num_rows(); ++r) {
    os << blk.family[r] << ": ";
    bool lead = true;
    auto part = [&](const Sparse& s, const VariableIndex& idx) {
      for (int p = s.start[r]; p < s.start[r + 1]; ++p) {
        const double a = s.val[p];
        os << (lead ? (a < 0 ? "-" : "") : (a < 0 ? " - " : " + "));
        lead = false;
        if (std::fabs(std::fabs(a) - 1.0) > tol::kZeroCoef)
          os << std::fabs(a) << " ";
        os << idx.name(s.col[p]);
      }
    };
    part(blk.x, x);
    part(blk.y, y);
    part(blk.v, v);
    if (lead) os << "0";
    os << " " << sense_str[(int)blk.sense[r]] << " " << blk.rhs[r] << "\n";
  }
  return os.str();
}

}  // namespace jumuc
