// Power-system data model, structured-text case files, and the budgeted
// uncertainty set over load and wind forecasts.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jumuc {

struct Bus {
  int id = 0;
  double angle_limit = 0.0;  // radians; filled from the system default
};

struct Line {
  int id = 0;
  int from = 0, to = 0;      // bus ids (orientation: positive flow from->to)
  double reactance = 0.0;    // p.u. on a 100 MVA base
  double capacity = 0.0;     // MW
};

struct Unit {
  int id = 0;
  int bus = 0;
  double p_min = 0.0, p_max = 0.0;            // MW
  double ramp_up = 0.0, ramp_down = 0.0;      // MW/h while on
  double startup_ramp = 0.0, shutdown_ramp = 0.0;
  int min_up = 1, min_down = 1;               // hours
  double startup_cost = 0.0;                  // $ per start
  double no_load_cost = 0.0;                  // $/h while committed
  double marginal_cost = 0.0;                 // $/MWh above minimum output
};

struct Load {
  int id = 0;
  int bus = 0;
  std::vector<double> forecast;  // MW, length T
};

struct WindFarm {
  int id = 0;
  int bus = 0;
  double capacity = 0.0;
  std::vector<double> forecast;  // MW, length T, <= capacity
};

struct MaintenanceTask {
  int unit = 0;             // unit id
  int duration = 1;         // contiguous hours on outage
  int reported_start = 1;   // crew-reported preferred start hour (1-based)
  double initial_cost = 0.0;
  double deviation_penalty = 0.0;  // $ per hour of schedule shift
};

struct PowerSystem {
  std::string name;
  int horizon = 0;  // T
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Unit> units;
  std::vector<Load> loads;
  std::vector<WindFarm> wind;
  std::vector<MaintenanceTask> maintenance;
  std::vector<double> resource_budget;  // crews available per hour, length T
  double reserve_rate = 0.0;            // rho
  double shed_penalty = 0.0;            // $/MWh unserved load
  double curtail_penalty = 0.0;         // $/MWh spilled wind
  double angle_limit = 0.0;             // default bus angle limit, radians

  int bus_index(int id) const;   // position in buses, -1 if unknown
  int unit_index(int id) const;
};

class CaseError : public std::runtime_error {
 public:
  explicit CaseError(std::vector<std::string> errs);
  const std::vector<std::string>& errors() const { return errs_; }

 private:
  std::vector<std::string> errs_;
};

PowerSystem load_case(const std::string& path);
PowerSystem parse_case(const std::string& text, const std::string& origin);
std::string save_case(const PowerSystem& sys);
void save_case_to_file(const PowerSystem& sys, const std::string& path);

// Interval forecasts: entity-by-period means and half-widths, plus one
// deviation budget per period for loads and one for wind.
struct UncertaintySet {
  std::vector<std::vector<double>> load_mean, load_half;  // [load][t]
  std::vector<std::vector<double>> wind_mean, wind_half;  // [farm][t]
  double gamma_load = 0.0;
  double gamma_wind = 0.0;

  int num_loads() const { return static_cast<int>(load_mean.size()); }
  int num_wind() const { return static_cast<int>(wind_mean.size()); }
  int horizon() const {
    return load_mean.empty() ? (wind_mean.empty() ? 0 : (int)wind_mean[0].size())
                             : (int)load_mean[0].size();
  }
};

struct ScenarioRealization {
  std::vector<std::vector<double>> load;  // [load][t]
  std::vector<std::vector<double>> wind;  // [farm][t]
};

// half-width = error_fraction * mean; budgets are absolute entity counts,
// clamped to [0, population].
UncertaintySet build_uncertainty_set(const PowerSystem& sys,
                                     double error_fraction, double gamma_load,
                                     double gamma_wind);

ScenarioRealization scenario_center(const UncertaintySet& set);
bool scenarios_equal(const ScenarioRealization& a, const ScenarioRealization& b,
                     double tol);

std::vector<std::string> membership_violations(const UncertaintySet& set,
                                               const ScenarioRealization& s);
bool check_membership(const UncertaintySet& set, const ScenarioRealization& s);

}  // namespace jumuc
