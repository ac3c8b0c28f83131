#include "jumuc/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>

#include "jumuc/simplex.hpp"
#include "jumuc/tolerances.hpp"

namespace jumuc {

namespace {

struct Node {
  long id = 0;
  double bound = 0.0;  // parent LP value (min-sense internal)
  std::vector<std::pair<int, std::pair<double, double>>> fixes;  // col -> (lb,ub)
  std::shared_ptr<std::vector<VarStatus>> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // smallest bound first
    return a.id > b.id;
  }
};

}  // namespace

MipSolution solve_mip(const LpModel& model, const MipOptions& opts,
                      const std::vector<VarStatus>* warm) {
  MipSolution out;
  const double flip = (model.sense == ObjSense::Maximize) ? -1.0 : 1.0;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  LpModel work = model;
  LpOptions lp_opts;
  lp_opts.iter_limit = opts.lp_iter_limit;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0, nodes = 0;
  double incumbent = kInf;  // min-sense internal value
  std::vector<double> inc_x;
  bool have_inc = false;
  double global_bound = -kInf;

  auto emit_log = [&] {
    if (!opts.log_hook) return;
    double inc_ext = have_inc ? flip * incumbent : (flip > 0 ? kInf : -kInf);
    double bnd_ext = flip * global_bound;
    double gap = have_inc
                     ? std::fabs(incumbent - global_bound) /
                           std::max(1.0, std::fabs(incumbent))
                     : kInf;
    opts.log_hook(nodes, inc_ext, bnd_ext, gap);
  };

  {
    Node root;
    root.id = next_id++;
    root.bound = -kInf;
    if (warm) root.warm = std::make_shared<std::vector<VarStatus>>(*warm);
    open.push(std::move(root));
  }

  auto gap_now = [&] {
    if (!have_inc) return kInf;
    return std::fabs(incumbent - global_bound) /
           std::max(1.0, std::fabs(incumbent));
  };

  SolveStatus final_status = SolveStatus::Optimal;
  bool root_infeasible = false, root_unbounded = false, numerical = false;

  // Until the first incumbent exists, the search plunges: one child of each
  // branching is processed immediately (held here) and only its sibling
  // joins the best-first queue.
  std::optional<Node> pending;

  while (!open.empty() || pending) {
    // Global bound = min over open nodes (their parent bounds are valid
    // bounds for the subtrees).
    double frontier = pending ? pending->bound : kInf;
    if (!open.empty()) frontier = std::min(frontier, open.top().bound);
    global_bound = std::max(global_bound, std::min(frontier, incumbent));
    if (have_inc && gap_now() <= opts.rel_gap + 1e-15) break;
    if (nodes >= opts.node_limit) {
      final_status = SolveStatus::NodeLimit;
      break;
    }
    if (opts.time_limit_sec > 0 && elapsed() > opts.time_limit_sec) {
      final_status = SolveStatus::TimeLimit;
      break;
    }

    Node node;
    if (pending) {
      node = std::move(*pending);
      pending.reset();
    } else {
      node = open.top();
      open.pop();
    }
    if (have_inc && node.bound >= incumbent - 1e-12 * std::max(1.0, std::fabs(incumbent))) {
      continue;  // cannot improve
    }
    ++nodes;

    // Apply this node's bound fixes.
    std::vector<std::pair<int, std::pair<double, double>>> saved;
    saved.reserve(node.fixes.size());
    bool contradictory = false;
    for (const auto& [j, b] : node.fixes) {
      saved.push_back({j, {work.lb[j], work.ub[j]}});
      work.lb[j] = std::max(work.lb[j], b.first);
      work.ub[j] = std::min(work.ub[j], b.second);
      if (work.lb[j] > work.ub[j] + 1e-12) contradictory = true;
    }
    auto restore = [&] {
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        work.lb[it->first] = it->second.first;
        work.ub[it->first] = it->second.second;
      }
    };
    if (contradictory) {
      restore();
      continue;
    }

    LpSolution rel = solve_lp(work, lp_opts, node.warm.get());
    out.lp_iterations += rel.iterations;
    restore();

    if (rel.status == SolveStatus::Infeasible) {
      if (nodes == 1) root_infeasible = true;
      continue;
    }
    if (rel.status == SolveStatus::Unbounded) {
      if (nodes == 1) {
        root_unbounded = true;
        break;
      }
      numerical = true;  // bounded parents cannot spawn unbounded children
      continue;
    }
    if (rel.status != SolveStatus::Optimal) {
      numerical = true;
      continue;
    }

    double val = flip * rel.objective;  // min-sense internal
    if (nodes == 1 && out.root_basis.empty()) out.root_basis = rel.basis;
    if (have_inc && val >= incumbent - 1e-12 * std::max(1.0, std::fabs(incumbent)))
      continue;

    // Most fractional integer column; smallest index on ties.
    int branch_col = -1;
    double best_frac = tol::kIntegrality;
    for (int j = 0; j < work.num_cols(); ++j) {
      if (!work.integral[j]) continue;
      double v = rel.x[j];
      double dist = std::fabs(v - std::round(v));
      if (dist <= tol::kIntegrality) continue;
      if (branch_col < 0 || dist > best_frac + 1e-12) {
        branch_col = j;
        best_frac = dist;
      }
    }

    if (branch_col < 0) {
      // Integral: new incumbent.
      incumbent = val;
      have_inc = true;
      inc_x = rel.x;
      for (int j = 0; j < work.num_cols(); ++j)
        if (work.integral[j]) inc_x[j] = std::round(inc_x[j]);
      emit_log();
      continue;
    }

    double v = rel.x[branch_col];
    auto basis = std::make_shared<std::vector<VarStatus>>(rel.basis);
    Node down, up;
    down.id = next_id++;
    down.bound = val;
    down.fixes = node.fixes;
    down.fixes.push_back({branch_col, {-kInf, std::floor(v)}});
    down.warm = basis;
    up.id = next_id++;
    up.bound = val;
    up.fixes = node.fixes;
    up.fixes.push_back({branch_col, {std::ceil(v), kInf}});
    up.warm = basis;
    if (!have_inc && !std::getenv("JUMUC_NO_DIVE")) {
      // chase the rounding of the branch variable
      if (v - std::floor(v) >= 0.5) {
        open.push(std::move(down));
        pending = std::move(up);
      } else {
        open.push(std::move(up));
        pending = std::move(down);
      }
    } else {
      open.push(std::move(down));
      open.push(std::move(up));
    }
    emit_log();
  }

  if (open.empty() && final_status == SolveStatus::Optimal) {
    global_bound = have_inc ? incumbent : global_bound;
  }

  if (root_unbounded) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  if (!have_inc) {
    if (root_infeasible && open.empty()) {
      out.status = SolveStatus::Infeasible;
    } else if (final_status != SolveStatus::Optimal) {
      out.status = final_status;
    } else if (numerical) {
      out.status = SolveStatus::NumericalFailure;
    } else {
      out.status = SolveStatus::Infeasible;
    }
    return out;
  }

  out.status = final_status;
  out.objective = flip * incumbent;
  out.best_bound = flip * global_bound;
  out.gap = std::fabs(incumbent - global_bound) /
            std::max(1.0, std::fabs(incumbent));
  out.x = std::move(inc_x);
  out.nodes = nodes;
  return out;
}

}  // namespace jumuc
