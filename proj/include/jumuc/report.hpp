#pragma once

#include <string>
#include <vector>

#include "jumuc/driver.hpp"
#include "jumuc/system_model.hpp"

namespace jumuc {

inline constexpr const char* kToolVersion = "0.1.0";

// Written to <out_dir>/manifest.json before solving starts so every run
// directory is self-describing and pinned to the exact input bytes.
struct RunManifest {
  std::string case_path;
  std::string case_digest;  // SHA-256 of the case file contents
  std::string out_dir;
  std::string version = kToolVersion;
  SolverConfig config;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

void write_manifest(const RunManifest& man);

// Emits report.json, report.txt, convergence.csv, oa_trace.csv, net_load.csv
// and capacity.csv into man.out_dir.
void write_run_artifacts(const RunManifest& man, const PowerSystem& sys,
                         const RobustSolution& sol);

std::string render_report_text(const PowerSystem& sys, const SolverConfig& cfg,
                               const RobustSolution& sol);

// Everything needed to compare or re-verify a finished run directory.
struct StoredRun {
  std::string label;  // directory basename
  RunManifest manifest;
  double objective = 0.0;
  CostBreakdown breakdown;
  std::vector<MaintenanceInterval> schedule;
  bool converged = false;
  int iterations = 0;
  double final_gap = 0.0;
  double wall_ms_total = 0.0;
  int scenario_count = 0;
  std::vector<double> x, y;
  ScenarioRealization worst;
};

StoredRun load_run(const std::string& dir);

// Recomputes the cost breakdown and feasibility of the stored solution from
// the case file alone; returns human-readable problems (empty = verified).
std::vector<std::string> verify_run(const StoredRun& run);

// One column per run: cost categories in k$, schedule, convergence status.
std::string comparison_table(const std::vector<StoredRun>& runs);

struct SweepCell {
  double eps_mp = 0.0;
  double alpha_shrink = 0.0;
  int repeats = 1;
  double total = 0.0;    // averaged objective ($)
  double wall_ms = 0.0;  // averaged wall time
  double iterations = 0.0;
};

// Parameter-sweep matrix with a reference row; deviations are relative to
// the reference total.
std::string sweep_table(const std::vector<SweepCell>& cells,
                        const SweepCell& reference);

}  // namespace jumuc
