// Plain LP/MIP container shared by the simplex core, branch and bound, the
// standard-format writer and all model builders. Rows are stored in CSR form;
// variable bounds may be +/-infinity.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace jumuc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { Ge, Le, Eq };
enum class ObjSense : std::uint8_t { Minimize, Maximize };

struct LpModel {
  ObjSense sense = ObjSense::Minimize;
  double obj_offset = 0.0;

  std::vector<double> obj;
  std::vector<double> lb, ub;
  std::vector<std::uint8_t> integral;  // 1 = integer-constrained column
  std::vector<std::string> col_name;   // optional; generated names used if empty

  std::vector<int> row_start{0};
  std::vector<int> col_index;
  std::vector<double> value;
  std::vector<RowSense> row_sense;
  std::vector<double> rhs;
  std::vector<std::string> row_name;

  int num_cols() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_col(double cost, double lo, double hi, bool is_int = false,
              std::string name = {}) {
    obj.push_back(cost);
    lb.push_back(lo);
    ub.push_back(hi);
    integral.push_back(is_int ? 1 : 0);
    col_name.push_back(std::move(name));
    return num_cols() - 1;
  }

  int add_row(const std::vector<std::pair<int, double>>& terms, RowSense s,
              double b, std::string name = {}) {
    for (const auto& [j, a] : terms) {
      col_index.push_back(j);
      value.push_back(a);
    }
    row_start.push_back(static_cast<int>(col_index.size()));
    row_sense.push_back(s);
    rhs.push_back(b);
    row_name.push_back(std::move(name));
    return num_rows() - 1;
  }
};

enum class SolveStatus : std::uint8_t {
  Optimal,
  Infeasible,
  Unbounded,
  IterLimit,
  TimeLimit,
  NodeLimit,
  NumericalFailure,
};

const char* to_string(SolveStatus s);

// Nonbasic/basic state per column (structural columns first, then one slack
// per row). Used to warm start subsequent solves.
enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeNonbasic };

struct LpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> x;             // primal values, structural columns
  std::vector<double> dual;          // one multiplier per row
  std::vector<double> reduced_cost;  // per structural column
  std::vector<VarStatus> basis;      // size cols+rows; reusable as warm start
  long iterations = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

struct MipSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;   // incumbent value
  double best_bound = 0.0;  // proven bound (min sense: lower bound)
  double gap = 0.0;         // |objective - best_bound| / max(1, |objective|)
  std::vector<double> x;
  std::vector<VarStatus> root_basis;
  long nodes = 0;
  long lp_iterations = 0;

  bool feasible() const {
    return status == SolveStatus::Optimal || status == SolveStatus::IterLimit ||
           status == SolveStatus::TimeLimit || status == SolveStatus::NodeLimit;
  }
};

}  // namespace jumuc
