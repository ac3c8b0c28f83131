#include "jumuc/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jumuc/duality.hpp"
#include "jumuc/tolerances.hpp"

namespace jumuc {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string kdollar(double v) { return fmt("%.2f", v / 1000.0); }

ordered_json config_json(const SolverConfig& cfg) {
  ordered_json j;
  j["mode"] = to_string(cfg.mode);
  j["gamma_load"] = cfg.gamma_load;
  j["gamma_wind"] = cfg.gamma_wind;
  j["error_fraction"] = cfg.error_fraction;
  j["delta"] = cfg.delta;
  j["delta_tilde"] = cfg.delta_tilde;
  j["delta_oa"] = cfg.delta_oa;
  j["eps_mp"] = cfg.eps_mp;
  j["alpha_shrink"] = cfg.alpha_shrink;
  j["max_iterations"] = cfg.max_iterations;
  j["oa_iteration_cap"] = cfg.oa_iteration_cap;
  j["time_limit_sec"] = cfg.time_limit_sec;
  j["node_limit"] = cfg.node_limit;
  j["seed"] = cfg.seed;
  return j;
}

SolverConfig config_from_json(const ordered_json& j) {
  SolverConfig cfg;
  cfg.mode = parse_mode(j.at("mode").get<std::string>());
  cfg.gamma_load = j.at("gamma_load").get<double>();
  cfg.gamma_wind = j.at("gamma_wind").get<double>();
  cfg.error_fraction = j.at("error_fraction").get<double>();
  cfg.delta = j.at("delta").get<double>();
  cfg.delta_tilde = j.at("delta_tilde").get<double>();
  cfg.delta_oa = j.at("delta_oa").get<double>();
  cfg.eps_mp = j.at("eps_mp").get<double>();
  cfg.alpha_shrink = j.at("alpha_shrink").get<double>();
  cfg.max_iterations = j.at("max_iterations").get<int>();
  cfg.oa_iteration_cap = j.at("oa_iteration_cap").get<int>();
  cfg.time_limit_sec = j.at("time_limit_sec").get<double>();
  cfg.node_limit = j.at("node_limit").get<long>();
  cfg.seed = j.at("seed").get<unsigned>();
  return cfg;
}

double total_wall_ms(const IterationState& st) {
  double s = 0.0;
  for (const IterationRecord& r : st.records) s += r.wall_ms;
  return s;
}

std::string oa_trace_csv(const IterationState& st) {
  std::string out = "iter,j,lower,upper\n";
  char buf[256];
  for (size_t i = 0; i < st.oracle_traces.size(); ++i)
    for (const OaTraceRow& row : st.oracle_traces[i]) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g\n", i + 1, row.j,
                    row.lower, row.upper);
      out += buf;
    }
  return out;
}

std::string net_load_csv(const PowerSystem& sys, const RobustSolution& sol) {
  std::string out =
      "period,load_forecast,load_worst,wind_forecast,wind_worst,"
      "net_forecast,net_worst\n";
  char buf[256];
  for (int t = 0; t < sys.horizon; ++t) {
    double lf = 0.0, lw = 0.0, wf = 0.0, ww = 0.0;
    for (size_t d = 0; d < sys.loads.size(); ++d) {
      lf += sys.loads[d].forecast[t];
      lw += sol.worst.load[d][t];
    }
    for (size_t w = 0; w < sys.wind.size(); ++w) {
      wf += sys.wind[w].forecast[t];
      ww += sol.worst.wind[w][t];
    }
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  t + 1, lf, lw, wf, ww, lf - wf, lw - ww);
    out += buf;
  }
  return out;
}

// Available-capacity decomposition by unit role in THIS solution: units with
// a maintenance task, units that cycle on/off, and units committed for the
// whole horizon.
std::string capacity_csv(const PowerSystem& sys, const RobustSolution& sol) {
  const int T = sys.horizon;
  std::vector<int> klass(sys.units.size(), 0);  // 0 base, 1 start-stop, 2 maint
  for (const MaintenanceTask& task : sys.maintenance)
    for (size_t g = 0; g < sys.units.size(); ++g)
      if (sys.units[g].id == task.unit) klass[g] = 2;
  for (size_t g = 0; g < sys.units.size(); ++g) {
    if (klass[g] == 2) continue;
    for (int t = 0; t < T; ++t)
      if (sol.commitment[g][t] < 0.5) {
        klass[g] = 1;
        break;
      }
  }
  std::string out = "period,base,start_stop,maintained,total\n";
  char buf[256];
  for (int t = 0; t < T; ++t) {
    double cap[3] = {0.0, 0.0, 0.0};
    for (size_t g = 0; g < sys.units.size(); ++g)
      cap[klass[g]] += sol.commitment[g][t] * sys.units[g].p_max;
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f\n", t + 1, cap[0],
                  cap[1], cap[2], cap[0] + cap[1] + cap[2]);
    out += buf;
  }
  return out;
}

ordered_json scenario_json(const ScenarioRealization& s) {
  ordered_json j;
  j["load"] = s.load;
  j["wind"] = s.wind;
  return j;
}

ScenarioRealization scenario_from_json(const ordered_json& j) {
  ScenarioRealization s;
  s.load = j.at("load").get<std::vector<std::vector<double>>>();
  s.wind = j.at("wind").get<std::vector<std::vector<double>>>();
  return s;
}

ordered_json report_json(const RunManifest& man, const PowerSystem& sys,
                         const RobustSolution& sol) {
  ordered_json j;
  j["version"] = man.version;
  j["case"] = {{"path", man.case_path},
               {"name", sys.name},
               {"digest", man.case_digest},
               {"horizon", sys.horizon}};
  j["config"] = config_json(man.config);
  j["status"] = {{"converged", sol.state.converged},
                 {"iterations", sol.state.iterations},
                 {"stop_reason", sol.state.stop_reason},
                 {"final_gap", sol.state.final_gap},
                 {"scenario_count", sol.state.scenario_count},
                 {"wall_ms_total", total_wall_ms(sol.state)}};
  j["objective"] = sol.objective;
  j["breakdown"] = {{"maintenance", sol.breakdown.maintenance},
                    {"commitment", sol.breakdown.commitment},
                    {"dispatch", sol.breakdown.dispatch},
                    {"total", sol.breakdown.total}};
  ordered_json sched = ordered_json::array();
  for (const MaintenanceInterval& iv : sol.schedule)
    sched.push_back(
        {{"unit", iv.unit_id}, {"start", iv.start}, {"end", iv.end}});
  j["schedule"] = sched;
  j["commitment"] = sol.commitment;
  j["worst_scenario"] = scenario_json(sol.worst);
  j["first_stage"] = sol.x;
  j["dispatch"] = sol.dispatch;
  ordered_json conv = ordered_json::array();
  for (const IterationRecord& r : sol.state.records)
    conv.push_back({{"iter", r.iter},
                    {"eps_mp", r.eps_mp},
                    {"L_bar", r.L_bar},
                    {"L_in", r.L_in},
                    {"U_in", r.U_in},
                    {"U_bar", r.U_bar},
                    {"gap", r.gap},
                    {"inexact_gap", r.inexact_gap},
                    {"action", r.action},
                    {"wall_ms", r.wall_ms},
                    {"scenario_added", r.scenario_added},
                    {"scenario_count", r.scenario_count}});
  j["convergence"] = conv;
  return j;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &n, EVP_sha256(), nullptr) !=
      1)
    throw std::runtime_error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  return sha256_hex(read_file(path));
}

void write_manifest(const RunManifest& man) {
  fs::create_directories(man.out_dir);
  ordered_json j;
  j["version"] = man.version;
  j["case_path"] = man.case_path;
  j["case_digest"] = man.case_digest;
  j["out_dir"] = man.out_dir;
  j["config"] = config_json(man.config);
  write_file((fs::path(man.out_dir) / "manifest.json").string(),
             j.dump(2) + "\n");
}

std::string render_report_text(const PowerSystem& sys, const SolverConfig& cfg,
                               const RobustSolution& sol) {
  std::ostringstream out;
  out << "Joint maintenance / commitment solution report\n";
  out << "Case: " << sys.name << " (T=" << sys.horizon << ")\n";
  out << "Mode: " << to_string(cfg.mode) << "   Gamma_D=" << cfg.gamma_load
      << "  Gamma_W=" << cfg.gamma_wind
      << "  error_fraction=" << cfg.error_fraction << "\n\n";
  out << "Cost summary (k$)\n";
  out << "  Maintenance  " << kdollar(sol.breakdown.maintenance) << "\n";
  out << "  Commitment   " << kdollar(sol.breakdown.commitment) << "\n";
  out << "  Dispatch     " << kdollar(sol.breakdown.dispatch) << "\n";
  out << "  Total        " << kdollar(sol.breakdown.total) << "\n\n";
  out << "Maintenance schedule\n";
  if (sol.schedule.empty()) out << "  (no tasks)\n";
  for (size_t n = 0; n < sol.schedule.size(); ++n) {
    const MaintenanceInterval& iv = sol.schedule[n];
    const MaintenanceTask& task = sys.maintenance[n];
    out << "  unit " << iv.unit_id << ": hours " << iv.start << "-" << iv.end
        << " (reported " << task.reported_start << ", duration "
        << task.duration << ")\n";
  }
  out << "\nStatus: " << (sol.state.converged ? "converged" : "NOT CONVERGED")
      << " in " << sol.state.iterations << " iteration(s), final gap "
      << fmt("%.4f", sol.state.final_gap * 100.0) << "%, scenarios "
      << sol.state.scenario_count << "\n";
  out << "Stop reason: " << sol.state.stop_reason << "\n";
  return out.str();
}

void write_run_artifacts(const RunManifest& man, const PowerSystem& sys,
                         const RobustSolution& sol) {
  fs::create_directories(man.out_dir);
  const fs::path dir(man.out_dir);
  write_file((dir / "report.json").string(),
             report_json(man, sys, sol).dump(2) + "\n");
  write_file((dir / "report.txt").string(),
             render_report_text(sys, man.config, sol));
  write_file((dir / "convergence.csv").string(), convergence_csv(sol.state));
  write_file((dir / "oa_trace.csv").string(), oa_trace_csv(sol.state));
  write_file((dir / "net_load.csv").string(), net_load_csv(sys, sol));
  write_file((dir / "capacity.csv").string(), capacity_csv(sys, sol));
}

StoredRun load_run(const std::string& dir) {
  StoredRun run;
  run.label = fs::path(dir).filename().string();
  if (run.label.empty()) run.label = dir;
  const ordered_json man =
      ordered_json::parse(read_file((fs::path(dir) / "manifest.json").string()));
  run.manifest.case_path = man.at("case_path").get<std::string>();
  run.manifest.case_digest = man.at("case_digest").get<std::string>();
  run.manifest.out_dir = dir;
  run.manifest.version = man.at("version").get<std::string>();
  run.manifest.config = config_from_json(man.at("config"));

  const ordered_json rep =
      ordered_json::parse(read_file((fs::path(dir) / "report.json").string()));
  run.objective = rep.at("objective").get<double>();
  const ordered_json& b = rep.at("breakdown");
  run.breakdown.maintenance = b.at("maintenance").get<double>();
  run.breakdown.commitment = b.at("commitment").get<double>();
  run.breakdown.dispatch = b.at("dispatch").get<double>();
  run.breakdown.total = b.at("total").get<double>();
  for (const ordered_json& s : rep.at("schedule")) {
    MaintenanceInterval iv;
    iv.unit_id = s.at("unit").get<int>();
    iv.start = s.at("start").get<int>();
    iv.end = s.at("end").get<int>();
    run.schedule.push_back(iv);
  }
  const ordered_json& st = rep.at("status");
  run.converged = st.at("converged").get<bool>();
  run.iterations = st.at("iterations").get<int>();
  run.final_gap = st.at("final_gap").get<double>();
  run.wall_ms_total = st.at("wall_ms_total").get<double>();
  run.scenario_count = st.at("scenario_count").get<int>();
  run.x = rep.at("first_stage").get<std::vector<double>>();
  run.y = rep.at("dispatch").get<std::vector<double>>();
  run.worst = scenario_from_json(rep.at("worst_scenario"));
  return run;
}

std::vector<std::string> verify_run(const StoredRun& run) {
  std::vector<std::string> problems;
  std::string bytes;
  try {
    bytes = read_file(run.manifest.case_path);
  } catch (const std::exception& e) {
    problems.push_back(std::string("case file unreadable: ") + e.what());
    return problems;
  }
  if (sha256_hex(bytes) != run.manifest.case_digest)
    problems.push_back("case file digest does not match the manifest");

  PowerSystem sys;
  try {
    sys = parse_case(bytes, run.manifest.case_path);
  } catch (const CaseError& e) {
    for (const std::string& m : e.errors())
      problems.push_back("case error: " + m);
    return problems;
  }
  const SolverConfig& cfg = run.manifest.config;
  const UncertaintySet set = build_uncertainty_set(
      sys, cfg.error_fraction, cfg.gamma_load, cfg.gamma_wind);
  const MatrixForm mf = assemble_matrix_form(sys, set);
  if ((int)run.x.size() != mf.dim_x() || (int)run.y.size() != mf.dim_y()) {
    problems.push_back("stored solution dimensions do not match the model");
    return problems;
  }
  for (const std::string& fam : first_stage_violations(mf, run.x))
    problems.push_back("first-stage constraint family violated: " + fam);
  for (const std::string& v : membership_violations(set, run.worst))
    problems.push_back("worst scenario outside the uncertainty set: " + v);

  // Recourse feasibility of the stored dispatch at the stored scenario.
  const std::vector<double> v = scenario_to_vector(mf, run.worst);
  const std::vector<double> Ex = mf.E.apply(run.x);
  const std::vector<double> Gv = mf.G.apply(v);
  const std::vector<double> Hy = mf.H.apply(run.y);
  for (size_t i = 0; i < mf.g.size(); ++i) {
    const double rhs = mf.g[i] - Ex[i] - Gv[i];
    if (Hy[i] < rhs - 1e-6 * std::max(1.0, std::fabs(rhs))) {
      problems.push_back("dispatch violates coupling row family: " +
                         mf.ineq_family[i]);
      break;
    }
  }
  const std::vector<double> Mv = mf.M.apply(v);
  const std::vector<double> Fy = mf.F.apply(run.y);
  for (size_t i = 0; i < mf.f.size(); ++i) {
    const double rhs = mf.f[i] - Mv[i];
    if (std::fabs(Fy[i] - rhs) > 1e-6 * std::max(1.0, std::fabs(rhs))) {
      problems.push_back("dispatch violates balance row family: " +
                         mf.eq_family[i]);
      break;
    }
  }

  const CostBreakdown fresh = cost_breakdown(mf, run.x, run.y);
  const auto mismatch = [&](const char* name, double got, double want) {
    if (std::fabs(got - want) >
        tol::kCostBreakdownRel * std::max(1.0, std::fabs(want)))
      problems.push_back(std::string("recomputed ") + name +
                         " differs from the stored value: " +
                         fmt("%.9g", got) + " vs " + fmt("%.9g", want));
  };
  mismatch("maintenance cost", fresh.maintenance, run.breakdown.maintenance);
  mismatch("commitment cost", fresh.commitment, run.breakdown.commitment);
  mismatch("dispatch cost", fresh.dispatch, run.breakdown.dispatch);
  mismatch("total cost", fresh.total, run.breakdown.total);
  mismatch("objective", fresh.total, run.objective);
  return problems;
}

std::string comparison_table(const std::vector<StoredRun>& runs) {
  if (runs.empty()) return "(no runs)\n";
  const int w = 18;
  std::ostringstream out;
  const auto cell = [&](const std::string& s) {
    out << std::string(s.size() >= (size_t)w ? 1 : w - s.size(), ' ') << s;
  };
  out << "row";
  for (const StoredRun& r : runs)
    cell(r.label + " (" + to_string(r.manifest.config.mode) + ")");
  out << "\n";
  const auto row = [&](const std::string& name, auto value) {
    out << name << std::string(name.size() < 24 ? 24 - name.size() : 1, ' ');
    for (const StoredRun& r : runs) cell(value(r));
    out << "\n";
  };
  row("maintenance_cost_k$", [](const StoredRun& r) {
    return kdollar(r.breakdown.maintenance);
  });
  row("commitment_cost_k$", [](const StoredRun& r) {
    return kdollar(r.breakdown.commitment);
  });
  row("dispatch_cost_k$",
      [](const StoredRun& r) { return kdollar(r.breakdown.dispatch); });
  row("total_cost_k$",
      [](const StoredRun& r) { return kdollar(r.breakdown.total); });
  size_t tasks = 0;
  for (const StoredRun& r : runs) tasks = std::max(tasks, r.schedule.size());
  for (size_t n = 0; n < tasks; ++n)
    row("schedule_task_" + std::to_string(n + 1), [n](const StoredRun& r) {
      if (n >= r.schedule.size()) return std::string("-");
      return "unit " + std::to_string(r.schedule[n].unit_id) + ": " +
             std::to_string(r.schedule[n].start) + "-" +
             std::to_string(r.schedule[n].end);
    });
  row("converged",
      [](const StoredRun& r) { return std::string(r.converged ? "yes" : "NO"); });
  row("iterations",
      [](const StoredRun& r) { return std::to_string(r.iterations); });
  row("wall_s",
      [](const StoredRun& r) { return fmt("%.2f", r.wall_ms_total / 1000.0); });
  return out.str();
}

std::string sweep_table(const std::vector<SweepCell>& cells,
                        const SweepCell& reference) {
  std::ostringstream out;
  out << "eps_mp    alpha_shrink  repeats  total_k$      wall_s   iters  "
         "vs_reference_%\n";
  char buf[256];
  const auto line = [&](const char* tag, const SweepCell& c) {
    const double dev = reference.total != 0.0
                           ? (c.total - reference.total) /
                                 std::fabs(reference.total) * 100.0
                           : 0.0;
    std::snprintf(buf, sizeof(buf),
                  "%-9s %-13s %-8d %-13.2f %-8.2f %-6.1f %+.4f\n", tag,
                  fmt("%.4g", c.alpha_shrink).c_str(), c.repeats,
                  c.total / 1000.0, c.wall_ms / 1000.0, c.iterations, dev);
    out << buf;
  };
  for (const SweepCell& c : cells)
    line(fmt("%.4g", c.eps_mp).c_str(), c);
  line("reference", reference);
  return out.str();
}

}  // namespace jumuc
