#include "jumuc/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jumuc/tolerances.hpp"
#include <nlohmann/json.hpp>

namespace jumuc {
namespace {

using ordered_json = nlohmann::ordered_json;

// Accumulates every failed check so a bad case file is reported in one pass.
struct Checker {
  std::vector<std::string> errs;
  void fail(const std::string& msg) { errs.push_back(msg); }
  bool require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
    return ok;
  }
};

std::string line_of(const std::string& text, size_t byte) {
  size_t line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return std::to_string(line);
}

class FieldReader {
 public:
  FieldReader(const ordered_json& j, std::string ctx, Checker& chk)
      : j_(j), ctx_(std::move(ctx)), chk_(chk) {}

  bool has(const char* key) const { return j_.contains(key); }

  double num(const char* key, double fallback = 0.0) {
    if (!j_.contains(key)) {
      chk_.fail(ctx_ + ": missing field '" + key + "'");
      return fallback;
    }
    if (!j_[key].is_number()) {
      chk_.fail(ctx_ + ": field '" + key + "' must be a number");
      return fallback;
    }
    return j_[key].get<double>();
  }

  int integer(const char* key, int fallback = 0) {
    double v = num(key, fallback);
    if (v != std::floor(v)) {
      chk_.fail(ctx_ + ": field '" + key + "' must be an integer");
      return fallback;
    }
    return static_cast<int>(v);
  }

  std::vector<double> series(const char* key) {
    std::vector<double> out;
    if (!j_.contains(key)) {
      chk_.fail(ctx_ + ": missing field '" + key + "'");
      return out;
    }
    if (!j_[key].is_array()) {
      chk_.fail(ctx_ + ": field '" + key + "' must be an array of numbers");
      return out;
    }
    for (const auto& v : j_[key]) {
      if (!v.is_number()) {
        chk_.fail(ctx_ + ": field '" + key + "' must be an array of numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

 private:
  const ordered_json& j_;
  std::string ctx_;
  Checker& chk_;
};

std::string ctx(const std::string& kind, size_t i) {
  return kind + "[" + std::to_string(i) + "]";
}

void validate(const PowerSystem& sys, Checker& chk) {
  const int T = sys.horizon;
  chk.require(T >= 1, "meta: horizon must be >= 1");

  auto check_unique = [&](const char* kind, const std::vector<int>& ids) {
    for (size_t i = 0; i < ids.size(); ++i) {
      chk.require(ids[i] >= 1, ctx(kind, i) + ": id must be >= 1");
      for (size_t j = 0; j < i; ++j)
        if (ids[i] == ids[j])
          chk.fail(ctx(kind, i) + ": duplicate id " + std::to_string(ids[i]));
    }
  };
  std::vector<int> bus_ids, line_ids, unit_ids, load_ids, wind_ids;
  for (const auto& b : sys.buses) bus_ids.push_back(b.id);
  for (const auto& l : sys.lines) line_ids.push_back(l.id);
  for (const auto& u : sys.units) unit_ids.push_back(u.id);
  for (const auto& d : sys.loads) load_ids.push_back(d.id);
  for (const auto& w : sys.wind) wind_ids.push_back(w.id);
  check_unique("buses", bus_ids);
  check_unique("lines", line_ids);
  check_unique("units", unit_ids);
  check_unique("loads", load_ids);
  check_unique("wind", wind_ids);

  chk.require(!sys.buses.empty(), "buses: at least one bus required");
  chk.require(!sys.units.empty(), "units: at least one unit required");

  auto bus_exists = [&](int id) { return sys.bus_index(id) >= 0; };

  for (size_t i = 0; i < sys.lines.size(); ++i) {
    const Line& l = sys.lines[i];
    chk.require(bus_exists(l.from),
                ctx("lines", i) + ": unknown bus " + std::to_string(l.from));
    chk.require(bus_exists(l.to),
                ctx("lines", i) + ": unknown bus " + std::to_string(l.to));
    chk.require(l.from != l.to, ctx("lines", i) + ": from == to");
    chk.require(l.reactance > 0, ctx("lines", i) + ": reactance must be > 0");
    chk.require(l.capacity > 0, ctx("lines", i) + ": capacity must be > 0");
  }

  for (size_t i = 0; i < sys.units.size(); ++i) {
    const Unit& g = sys.units[i];
    chk.require(bus_exists(g.bus),
                ctx("units", i) + ": unknown bus " + std::to_string(g.bus));
    chk.require(g.p_min >= 0, ctx("units", i) + ": p_min must be >= 0");
    chk.require(g.p_max >= g.p_min, ctx("units", i) + ": p_max < p_min");
    chk.require(g.ramp_up > 0, ctx("units", i) + ": ramp_up must be > 0");
    chk.require(g.ramp_down > 0, ctx("units", i) + ": ramp_down must be > 0");
    chk.require(g.startup_ramp >= g.p_min,
                ctx("units", i) + ": startup_ramp below p_min");
    chk.require(g.shutdown_ramp >= g.p_min,
                ctx("units", i) + ": shutdown_ramp below p_min");
    chk.require(g.min_up >= 1, ctx("units", i) + ": min_up must be >= 1");
    chk.require(g.min_down >= 1, ctx("units", i) + ": min_down must be >= 1");
    chk.require(g.startup_cost >= 0, ctx("units", i) + ": negative startup_cost");
    chk.require(g.no_load_cost >= 0, ctx("units", i) + ": negative no_load_cost");
    chk.require(g.marginal_cost >= 0,
                ctx("units", i) + ": negative marginal_cost");
  }

  for (size_t i = 0; i < sys.loads.size(); ++i) {
    const Load& d = sys.loads[i];
    chk.require(bus_exists(d.bus),
                ctx("loads", i) + ": unknown bus " + std::to_string(d.bus));
    if (chk.require((int)d.forecast.size() == T,
                    ctx("loads", i) + ": forecast length != horizon"))
      for (int t = 0; t < T; ++t)
        chk.require(d.forecast[t] >= 0,
                    ctx("loads", i) + ": negative forecast at hour " +
                        std::to_string(t + 1));
  }

  for (size_t i = 0; i < sys.wind.size(); ++i) {
    const WindFarm& w = sys.wind[i];
    chk.require(bus_exists(w.bus),
                ctx("wind", i) + ": unknown bus " + std::to_string(w.bus));
    chk.require(w.capacity >= 0, ctx("wind", i) + ": negative capacity");
    if (chk.require((int)w.forecast.size() == T,
                    ctx("wind", i) + ": forecast length != horizon"))
      for (int t = 0; t < T; ++t) {
        chk.require(w.forecast[t] >= 0,
                    ctx("wind", i) + ": negative forecast at hour " +
                        std::to_string(t + 1));
        chk.require(w.forecast[t] <= w.capacity + 1e-9,
                    ctx("wind", i) + ": forecast above capacity at hour " +
                        std::to_string(t + 1));
      }
  }

  std::vector<int> seen_units;
  for (size_t i = 0; i < sys.maintenance.size(); ++i) {
    const MaintenanceTask& n = sys.maintenance[i];
    chk.require(sys.unit_index(n.unit) >= 0,
                ctx("maintenance", i) + ": unknown unit " +
                    std::to_string(n.unit));
    if (std::find(seen_units.begin(), seen_units.end(), n.unit) !=
        seen_units.end())
      chk.fail(ctx("maintenance", i) + ": unit " + std::to_string(n.unit) +
               " already has a task");
    seen_units.push_back(n.unit);
    chk.require(n.duration >= 1 && n.duration <= T,
                ctx("maintenance", i) + ": duration outside [1, horizon]");
    chk.require(n.reported_start >= 1 &&
                    n.reported_start + n.duration - 1 <= T,
                ctx("maintenance", i) + ": reported window leaves horizon");
    chk.require(n.initial_cost >= 0,
                ctx("maintenance", i) + ": negative initial_cost");
    chk.require(n.deviation_penalty >= 0,
                ctx("maintenance", i) + ": negative deviation_penalty");
  }

  if (chk.require((int)sys.resource_budget.size() == T,
                  "system: resource_budget length != horizon"))
    for (int t = 0; t < T; ++t)
      chk.require(sys.resource_budget[t] >= 0,
                  "system: negative resource_budget at hour " +
                      std::to_string(t + 1));
  chk.require(sys.reserve_rate >= 0, "system: negative reserve_rate");
  chk.require(sys.shed_penalty >= 0, "system: negative shed_penalty");
  chk.require(sys.curtail_penalty >= 0, "system: negative curtail_penalty");
  chk.require(sys.angle_limit > 0, "system: angle_limit must be > 0");
}

}  // namespace

int PowerSystem::bus_index(int id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

int PowerSystem::unit_index(int id) const {
  for (size_t i = 0; i < units.size(); ++i)
    if (units[i].id == id) return static_cast<int>(i);
  return -1;
}

CaseError::CaseError(std::vector<std::string> errs)
    : std::runtime_error([&errs] {
        std::ostringstream os;
        os << "invalid case";
        for (const auto& e : errs) os << "\n  " << e;
        return os.str();
      }()),
      errs_(std::move(errs)) {}

PowerSystem parse_case(const std::string& text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CaseError({origin + ":" + line_of(text, e.byte) + ": " + e.what()});
  }

  Checker chk;
  PowerSystem sys;

  if (!j.contains("meta") || !j["meta"].is_object()) {
    chk.fail(origin + ": missing 'meta' object");
  } else {
    FieldReader r(j["meta"], "meta", chk);
    sys.horizon = r.integer("T", 1);
    sys.name = j["meta"].value("name", origin);
  }

  auto each = [&](const char* key, auto&& fn) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) {
      chk.fail(std::string(key) + ": must be an array");
      return;
    }
    size_t i = 0;
    for (const auto& item : j[key]) fn(item, i++);
  };

  double default_angle = 0.0;
  if (j.contains("system") && j["system"].is_object()) {
    FieldReader r(j["system"], "system", chk);
    sys.reserve_rate = r.num("reserve_rate");
    sys.shed_penalty = r.num("shed_penalty");
    sys.curtail_penalty = r.num("curtail_penalty");
    default_angle = r.num("angle_limit");
    sys.angle_limit = default_angle;
    const auto& rb = j["system"]["resource_budget"];
    if (!j["system"].contains("resource_budget")) {
      chk.fail("system: missing field 'resource_budget'");
    } else if (rb.is_number()) {
      sys.resource_budget.assign(std::max(sys.horizon, 0), rb.get<double>());
    } else {
      sys.resource_budget = r.series("resource_budget");
    }
  } else {
    chk.fail(origin + ": missing 'system' object");
  }

  each("buses", [&](const ordered_json& item, size_t i) {
    FieldReader r(item, ctx("buses", i), chk);
    Bus b;
    b.id = r.integer("id");
    b.angle_limit = r.has("angle_limit") ? r.num("angle_limit") : default_angle;
    sys.buses.push_back(b);
  });
  each("lines", [&](const ordered_json& item, size_t i) {
    FieldReader r(item, ctx("lines", i), chk);
    Line l;
    l.id = r.integer("id");
    l.from = r.integer("from");
    l.to = r.integer("to");
    l.reactance = r.num("reactance");
    l.capacity = r.num("capacity");
    sys.lines.push_back(l);
  });
  each("units", [&](const ordered_json& item, size_t i) {
    FieldReader r(item, ctx("units", i), chk);
    Unit g;
    g.id = r.integer("id");
    g.bus = r.integer("bus");
    g.p_min = r.num("p_min");
    g.p_max = r.num("p_max");
    g.ramp_up = r.num("ramp_up");
    g.ramp_down = r.num("ramp_down");
    g.startup_ramp = r.num("startup_ramp");
    g.shutdown_ramp = r.num("shutdown_ramp");
    g.min_up = r.integer("min_up", 1);
    g.min_down = r.integer("min_down", 1);
    g.startup_cost = r.num("startup_cost");
    g.no_load_cost = r.num("no_load_cost");
    g.marginal_cost = r.num("marginal_cost");
    sys.units.push_back(g);
  });
  each("loads", [&](const ordered_json& item, size_t i) {
    FieldReader r(item, ctx("loads", i), chk);
    Load d;
    d.id = r.integer("id");
    d.bus = r.integer("bus");
    d.forecast = r.series("forecast");
    sys.loads.push_back(d);
  });
  each("wind", [&](const ordered_json& item, size_t i) {
    FieldReader r(item, ctx("wind", i), chk);
    WindFarm w;
    w.id = r.integer("id");
    w.bus = r.integer("bus");
    w.capacity = r.num("capacity");
    w.forecast = r.series("forecast");
    sys.wind.push_back(w);
  });
  each("maintenance", [&](const ordered_json& item, size_t i) {
    FieldReader r(item, ctx("maintenance", i), chk);
    MaintenanceTask n;
    n.unit = r.integer("unit");
    n.duration = r.integer("duration", 1);
    n.reported_start = r.integer("reported_start", 1);
    n.initial_cost = r.num("initial_cost");
    n.deviation_penalty = r.num("deviation_penalty");
    sys.maintenance.push_back(n);
  });

  if (chk.errs.empty()) validate(sys, chk);
  if (!chk.errs.empty()) throw CaseError(std::move(chk.errs));
  return sys;
}

PowerSystem load_case(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaseError({path + ": cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_case(buf.str(), path);
}

std::string save_case(const PowerSystem& sys) {
  ordered_json j;
  j["meta"] = {{"name", sys.name}, {"T", sys.horizon}};
  j["system"] = {{"resource_budget", sys.resource_budget},
                 {"reserve_rate", sys.reserve_rate},
                 {"shed_penalty", sys.shed_penalty},
                 {"curtail_penalty", sys.curtail_penalty},
                 {"angle_limit", sys.angle_limit}};
  j["buses"] = ordered_json::array();
  for (const auto& b : sys.buses) {
    ordered_json e = {{"id", b.id}};
    if (b.angle_limit != sys.angle_limit) e["angle_limit"] = b.angle_limit;
    j["buses"].push_back(e);
  }
  j["lines"] = ordered_json::array();
  for (const auto& l : sys.lines)
    j["lines"].push_back({{"id", l.id},
                          {"from", l.from},
                          {"to", l.to},
                          {"reactance", l.reactance},
                          {"capacity", l.capacity}});
  j["units"] = ordered_json::array();
  for (const auto& g : sys.units)
    j["units"].push_back({{"id", g.id},
                          {"bus", g.bus},
                          {"p_min", g.p_min},
                          {"p_max", g.p_max},
                          {"ramp_up", g.ramp_up},
                          {"ramp_down", g.ramp_down},
                          {"startup_ramp", g.startup_ramp},
                          {"shutdown_ramp", g.shutdown_ramp},
                          {"min_up", g.min_up},
                          {"min_down", g.min_down},
                          {"startup_cost", g.startup_cost},
                          {"no_load_cost", g.no_load_cost},
                          {"marginal_cost", g.marginal_cost}});
  j["loads"] = ordered_json::array();
  for (const auto& d : sys.loads)
    j["loads"].push_back({{"id", d.id}, {"bus", d.bus}, {"forecast", d.forecast}});
  j["wind"] = ordered_json::array();
  for (const auto& w : sys.wind)
    j["wind"].push_back({{"id", w.id},
                         {"bus", w.bus},
                         {"capacity", w.capacity},
                         {"forecast", w.forecast}});
  j["maintenance"] = ordered_json::array();
  for (const auto& n : sys.maintenance)
    j["maintenance"].push_back({{"unit", n.unit},
                                {"duration", n.duration},
                                {"reported_start", n.reported_start},
                                {"initial_cost", n.initial_cost},
                                {"deviation_penalty", n.deviation_penalty}});
  return j.dump(2) + "\n";
}

void save_case_to_file(const PowerSystem& sys, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CaseError({path + ": cannot open file for writing"});
  out << save_case(sys);
}

UncertaintySet build_uncertainty_set(const PowerSystem& sys,
                                     double error_fraction, double gamma_load,
                                     double gamma_wind) {
  if (error_fraction < 0)
    throw std::invalid_argument("error_fraction must be >= 0");
  UncertaintySet set;
  set.load_mean.reserve(sys.loads.size());
  for (const auto& d : sys.loads) {
    set.load_mean.push_back(d.forecast);
    std::vector<double> half(d.forecast.size());
    for (size_t t = 0; t < half.size(); ++t)
      half[t] = error_fraction * d.forecast[t];
    set.load_half.push_back(std::move(half));
  }
  for (const auto& w : sys.wind) {
    set.wind_mean.push_back(w.forecast);
    std::vector<double> half(w.forecast.size());
    for (size_t t = 0; t < half.size(); ++t)
      half[t] = error_fraction * w.forecast[t];
    set.wind_half.push_back(std::move(half));
  }
  auto clamp = [](double g, double n) {
    return std::min(std::max(g, 0.0), n);
  };
  set.gamma_load = clamp(gamma_load, (double)sys.loads.size());
  set.gamma_wind = clamp(gamma_wind, (double)sys.wind.size());
  return set;
}

ScenarioRealization scenario_center(const UncertaintySet& set) {
  return ScenarioRealization{set.load_mean, set.wind_mean};
}

bool scenarios_equal(const ScenarioRealization& a, const ScenarioRealization& b,
                     double tol) {
  if (a.load.size() != b.load.size() || a.wind.size() != b.wind.size())
    return false;
  auto close = [tol](const std::vector<std::vector<double>>& x,
                     const std::vector<std::vector<double>>& y) {
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() != y[i].size()) return false;
      for (size_t t = 0; t < x[i].size(); ++t)
        if (std::fabs(x[i][t] - y[i][t]) > tol * (1.0 + std::fabs(y[i][t])))
          return false;
    }
    return true;
  };
  return close(a.load, b.load) && close(a.wind, b.wind);
}

namespace {

// One side of the set (loads or wind): box membership per entry plus the
// per-period deviation budget over entities with nonzero half-width.
void side_violations(const char* kind,
                     const std::vector<std::vector<double>>& mean,
                     const std::vector<std::vector<double>>& half,
                     const std::vector<std::vector<double>>& val, double gamma,
                     std::vector<std::string>& out) {
  if (val.size() != mean.size()) {
    out.push_back(std::string(kind) + ": entity count mismatch");
    return;
  }
  const int T = mean.empty() ? 0 : (int)mean[0].size();
  for (size_t i = 0; i < mean.size(); ++i)
    if ((int)val[i].size() != T) {
      out.push_back(std::string(kind) + "[" + std::to_string(i) +
                    "]: horizon mismatch");
      return;
    }
  for (int t = 0; t < T; ++t) {
    double used = 0.0;
    for (size_t i = 0; i < mean.size(); ++i) {
      const double dev = val[i][t] - mean[i][t];
      const double h = half[i][t];
      const double tol = tol::kMembership * (1.0 + std::fabs(mean[i][t]));
      if (h <= tol::kZeroCoef) {
        if (std::fabs(dev) > tol)
          out.push_back(std::string(kind) + "[" + std::to_string(i) +
                        "] hour " + std::to_string(t + 1) +
                        ": fixed entry deviates from mean");
        continue;
      }
      if (std::fabs(dev) > h + tol)
        out.push_back(std::string(kind) + "[" + std::to_string(i) + "] hour " +
                      std::to_string(t + 1) + ": outside interval");
      used += std::min(std::fabs(dev) / h, 1.0);
    }
    if (used > gamma + tol::kMembership * (1.0 + gamma))
      out.push_back(std::string(kind) + " hour " + std::to_string(t + 1) +
                    ": budget exceeded (" + std::to_string(used) + " > " +
                    std::to_string(gamma) + ")");
  }
}

}  // namespace

std::vector<std::string> membership_violations(const UncertaintySet& set,
                                               const ScenarioRealization& s) {
  std::vector<std::string> out;
  side_violations("loads", set.load_mean, set.load_half, s.load,
                  set.gamma_load, out);
  side_violations("wind", set.wind_mean, set.wind_half, s.wind, set.gamma_wind,
                  out);
  return out;
}

bool check_membership(const UncertaintySet& set,
                      const ScenarioRealization& s) {
  return membership_violations(set, s).empty();
}

}  // namespace jumuc
