// Scenario-indexed first-stage MILP: first-stage rows plus one recourse block
// per adopted scenario, an epigraph variable alpha_val for the worst adopted
// recourse cost, big-M linearization of the u*p products, and a lower-bound
// row c'x + alpha_val >= L_bar tightened across iterations.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "jumuc/formulation.hpp"
#include "jumuc/mip.hpp"
#include "jumuc/system_model.hpp"

namespace jumuc {

struct ScenarioBlock {
  int y0 = 0;                // first y column of this scenario
  std::vector<int> eta;      // g*T+t -> eta column (-1 when no cost term)
  int row0 = 0, num_rows = 0;
};

struct MasterModel {
  const MatrixForm* mf = nullptr;
  LpModel model;
  int col_alpha = -1;
  int row_lbar = -1;
  double L_bar = 0.0;
  int num_units = 0, horizon = 0;
  std::vector<double> unit_pmax;  // big-M per unit
  std::vector<double> unit_mc;    // marginal cost per unit
  std::vector<std::vector<double>> scenarios;
  std::vector<ScenarioBlock> blocks;
  std::vector<VarStatus> warm;    // basis carried across solves
};

class MasterInfeasible : public std::runtime_error {
 public:
  MasterInfeasible(std::string msg, std::vector<std::string> fams)
      : std::runtime_error(std::move(msg)), families(std::move(fams)) {}
  std::vector<std::string> families;
};

MasterModel init_master(const MatrixForm& mf, const PowerSystem& sys);

bool has_scenario(const MasterModel& m, const std::vector<double>& v);
void add_scenario(MasterModel& m, const std::vector<double>& v);

// Pins the maintenance start/status columns to the crew-reported plan
// (decoupled modes).
void fix_maintenance_at_reported(MasterModel& m, const PowerSystem& sys);

struct MasterResult {
  std::vector<double> xhat;  // snapped first-stage vector
  double U_in = 0.0;         // incumbent objective
  double L_in = 0.0;         // max(best bound, L_bar)
  double alpha = 0.0;
  MipSolution mip;
};

// Updates the lower-bound row to L_bar, then solves to relative gap eps_mp.
// Honors JUMUC_EXTERNAL_SOLVER (command invoked as `cmd model.mps out.txt`).
MasterResult solve_master(MasterModel& m, double eps_mp, double L_bar,
                          const MipOptions& opts = {});

// Relaxation probing over first-stage row families; names families whose
// removal restores LP feasibility (empty = integer-only or cross-family).
std::vector<std::string> diagnose_infeasible(const MasterModel& m);

}  // namespace jumuc
