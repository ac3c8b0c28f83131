// Constraint-block builders for the maintenance, commitment and dispatch
// stages, and assembly of the deterministic-equivalent matrix form
//
//   min_x c'x + max_v min_y (b'y + x'Ly + k'x)
//   s.t.  A x >= e
//         E x + H y + G v >= g
//         F y + M v  = f
//
// x collects (q, m, u, tau), y the dispatch variables, v the realized
// load/wind values.
#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jumuc/lp_model.hpp"
#include "jumuc/system_model.hpp"

namespace jumuc {

// One structured variable: kind tag plus (entity, period), both 0-based.
struct VarRef {
  std::string kind;
  int entity = 0;
  int period = 0;
};

class VariableIndex {
 public:
  int add(const std::string& kind, int entity, int period);
  int at(const std::string& kind, int entity, int period) const;  // throws
  bool has(const std::string& kind, int entity, int period) const;
  const VarRef& ref(int flat) const { return refs_[flat]; }
  std::string name(int flat) const;
  int size() const { return static_cast<int>(refs_.size()); }

 private:
  static std::string key(const std::string& kind, int entity, int period);
  std::vector<VarRef> refs_;
  std::unordered_map<std::string, int> lookup_;
};

struct Sparse {
  int nrows = 0, ncols = 0;
  std::vector<int> start{0};
  std::vector<int> col;
  std::vector<double> val;

  void add_row(const std::vector<std::pair<int, double>>& terms);
  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<double> apply_transpose(const std::vector<double>& x) const;
  double row_dot(int r, const std::vector<double>& x) const;
  int row_nnz(int r) const { return start[r + 1] - start[r]; }
};

// Rows over the (x, y, v) spaces with a role tag per row naming the
// constraint family it belongs to.
struct ConstraintBlock {
  std::vector<std::string> family;
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  Sparse x, y, v;

  int num_rows() const { return static_cast<int>(rhs.size()); }
  void set_widths(int nx, int ny, int nv);
  // Terms are (column, coefficient); zero coefficients are dropped and
  // duplicate columns combined.
  void add_row(const std::string& fam, RowSense s, double r,
               const std::vector<std::pair<int, double>>& x_terms,
               const std::vector<std::pair<int, double>>& y_terms = {},
               const std::vector<std::pair<int, double>>& v_terms = {});
  void append(const ConstraintBlock& other);
};

VariableIndex make_x_index(const PowerSystem& sys);
VariableIndex make_y_index(const PowerSystem& sys);
VariableIndex make_v_index(const PowerSystem& sys);

ConstraintBlock build_maintenance_block(const PowerSystem& sys);
ConstraintBlock build_commitment_block(const PowerSystem& sys,
                                       const UncertaintySet& set);
std::pair<ConstraintBlock, ConstraintBlock> build_dispatch_block(
    const PowerSystem& sys);

// Per-period cost of starting the task at hour t (1-based position t-1):
// initial cost plus the deviation penalty times the shift from the reported
// start; +infinity where the outage would run past the horizon.
std::vector<double> maintenance_cost_vector(const MaintenanceTask& task, int T);

struct MatrixForm {
  VariableIndex x_index, y_index, v_index;
  Sparse A, E, H, G, F, M, L;
  std::vector<double> e, g, f;
  std::vector<double> c, b, k;
  std::vector<std::string> a_family;     // per A row
  std::vector<std::string> ineq_family;  // per E/H/G row
  std::vector<std::string> eq_family;    // per F/M row

  int dim_x() const { return x_index.size(); }
  int dim_y() const { return y_index.size(); }
  int dim_v() const { return v_index.size(); }
};

MatrixForm assemble_matrix_form(const PowerSystem& sys,
                                const UncertaintySet& set);

// Flattens a scenario to the v-vector layout of make_v_index.
std::vector<double> scenario_to_vector(const MatrixForm& mf,
                                       const ScenarioRealization& s);
ScenarioRealization vector_to_scenario(const MatrixForm& mf,
                                       const std::vector<double>& v);

std::string dump_block(const ConstraintBlock& block, const VariableIndex& x,
                       const VariableIndex& y, const VariableIndex& v);

}  // namespace jumuc
