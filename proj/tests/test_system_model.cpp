// Case parsing/serialization, validation diagnostics, and the budgeted
// interval uncertainty set.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "jumuc/system_model.hpp"

using namespace jumuc;

#ifndef JUMUC_CASE_DIR
#define JUMUC_CASE_DIR "cases"
#endif

namespace {
const std::string kTiny = std::string(JUMUC_CASE_DIR) + "/tiny3.case";
}

TEST_CASE("tiny case parses with the expected inventory") {
  PowerSystem sys = load_case(kTiny);
  CHECK(sys.name == "tiny3");
  CHECK(sys.horizon == 3);
  REQUIRE(sys.buses.size() == 2);
  REQUIRE(sys.lines.size() == 1);
  REQUIRE(sys.units.size() == 2);
  REQUIRE(sys.loads.size() == 2);
  REQUIRE(sys.wind.size() == 1);
  REQUIRE(sys.maintenance.size() == 1);

  CHECK(sys.lines[0].reactance == 0.2);
  CHECK(sys.units[1].marginal_cost == 35.0);
  CHECK(sys.units[1].p_min == 5.0);
  CHECK(sys.loads[0].forecast == std::vector<double>{30.0, 40.0, 35.0});
  CHECK(sys.wind[0].capacity == 30.0);
  CHECK(sys.maintenance[0].unit == 2);
  CHECK(sys.maintenance[0].deviation_penalty == 25.0);
  CHECK(sys.reserve_rate == 1.05);
  CHECK(sys.shed_penalty == 3000.0);
  REQUIRE((int)sys.resource_budget.size() == sys.horizon);
  CHECK(sys.resource_budget[0] == 1.0);
  // scalar angle limit propagates to every bus
  for (const Bus& b : sys.buses) CHECK(b.angle_limit == 0.6);

  CHECK(sys.bus_index(2) == 1);
  CHECK(sys.bus_index(99) == -1);
  CHECK(sys.unit_index(1) == 0);
}

TEST_CASE("save and reparse is lossless") {
  PowerSystem sys = load_case(kTiny);
  PowerSystem twin = parse_case(save_case(sys), "roundtrip");
  CHECK(save_case(sys) == save_case(twin));
  CHECK(twin.horizon == sys.horizon);
  CHECK(twin.units.size() == sys.units.size());
  CHECK(twin.loads[1].forecast == sys.loads[1].forecast);
}

TEST_CASE("validation collects every defect, not just the first") {
  PowerSystem sys = load_case(kTiny);
  sys.units[0].bus = 17;                 // dangling bus reference
  sys.loads[0].forecast.pop_back();      // wrong horizon length
  sys.units[1].p_min = 50.0;             // exceeds p_max
  std::string text = save_case(sys);
  try {
    parse_case(text, "broken");
    FAIL("expected a case error");
  } catch (const CaseError& e) {
    CHECK(e.errors().size() >= 3);
    bool bus = false, len = false, pminmax = false;
    for (const auto& msg : e.errors()) {
      if (msg.find("bus") != std::string::npos) bus = true;
      if (msg.find("forecast") != std::string::npos) len = true;
      if (msg.find("p_min") != std::string::npos) pminmax = true;
    }
    CHECK(bus);
    CHECK(len);
    CHECK(pminmax);
  }
}

TEST_CASE("duplicate ids are rejected") {
  PowerSystem sys = load_case(kTiny);
  sys.units[1].id = sys.units[0].id;
  CHECK_THROWS_AS(parse_case(save_case(sys), "dup"), CaseError);
}

TEST_CASE("maintenance on an unknown unit is rejected") {
  PowerSystem sys = load_case(kTiny);
  sys.maintenance[0].unit = 9;
  CHECK_THROWS_AS(parse_case(save_case(sys), "badtask"), CaseError);
}

TEST_CASE("wind forecast above capacity is rejected") {
  PowerSystem sys = load_case(kTiny);
  sys.wind[0].forecast[1] = sys.wind[0].capacity + 1.0;
  CHECK_THROWS_AS(parse_case(save_case(sys), "windcap"), CaseError);
}

TEST_CASE("uncertainty set: widths scale with the forecast") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.25, 1.0, 1.0);
  REQUIRE(set.num_loads() == 2);
  REQUIRE(set.num_wind() == 1);
  REQUIRE(set.horizon() == 3);
  CHECK(set.load_mean[0][1] == 40.0);
  CHECK(set.load_half[0][1] == doctest::Approx(10.0));
  CHECK(set.wind_half[0][2] == doctest::Approx(3.75));
  CHECK(set.gamma_load == 1.0);
  CHECK(set.gamma_wind == 1.0);
}

TEST_CASE("budgets clamp to the population") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.1, 7.0, -2.0);
  CHECK(set.gamma_load == 2.0);  // only two loads exist
  CHECK(set.gamma_wind == 0.0);
}

TEST_CASE("center scenario is the forecast and always a member") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.2, 1.0, 1.0);
  ScenarioRealization c = scenario_center(set);
  CHECK(c.load[1][2] == 25.0);
  CHECK(c.wind[0][0] == 10.0);
  CHECK(check_membership(set, c));
  CHECK(membership_violations(set, c).empty());
}

TEST_CASE("membership flags box and budget violations separately") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.2, 1.0, 1.0);
  ScenarioRealization s = scenario_center(set);

  SUBCASE("outside the interval") {
    s.load[0][0] = set.load_mean[0][0] + 2.0 * set.load_half[0][0];
    auto v = membership_violations(set, s);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].find("load") != std::string::npos);
  }
  SUBCASE("inside the box but over budget") {
    // both loads fully up in one period needs budget 2, set has 1
    s.load[0][1] = set.load_mean[0][1] + set.load_half[0][1];
    s.load[1][1] = set.load_mean[1][1] + set.load_half[1][1];
    auto v = membership_violations(set, s);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].find("budget") != std::string::npos);
  }
  SUBCASE("fractional deviations share the budget") {
    s.load[0][1] = set.load_mean[0][1] + 0.5 * set.load_half[0][1];
    s.load[1][1] = set.load_mean[1][1] - 0.5 * set.load_half[1][1];
    CHECK(check_membership(set, s));
  }
}

TEST_CASE("zero half-width pins the realization to the mean") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.0, 1.0, 1.0);
  ScenarioRealization s = scenario_center(set);
  s.load[0][0] += 1.0;
  CHECK_FALSE(check_membership(set, s));
}

TEST_CASE("scenario equality uses the supplied tolerance") {
  PowerSystem sys = load_case(kTiny);
  UncertaintySet set = build_uncertainty_set(sys, 0.2, 1.0, 1.0);
  ScenarioRealization a = scenario_center(set), b = a;
  b.load[0][0] += 1e-9;
  CHECK(scenarios_equal(a, b, 1e-6));
  b.load[0][0] += 1.0;
  CHECK_FALSE(scenarios_equal(a, b, 1e-6));
}
