// Standard-format export/import: byte-stable writer, exact numeric round
// trips, integer markers, objective offsets, and the solution-vector reader.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "jumuc/mps_io.hpp"
#include "jumuc/simplex.hpp"

using namespace jumuc;

namespace {

LpModel sample_model() {
  LpModel m;
  m.sense = ObjSense::Minimize;
  m.obj_offset = -12.25;
  m.add_col(1.5, 0.0, 4.0);
  m.add_col(-2.0, -1.0, kInf, true);
  m.add_col(0.0, -kInf, kInf);
  m.add_col(0.125, 3.0, 3.0, true);
  m.add_row({{0, 1.0}, {1, 2.0}}, RowSense::Le, 10.0);
  m.add_row({{1, -1.0}, {2, 0.3333333333333333}}, RowSense::Ge, -2.0);
  m.add_row({{0, 1.0}, {2, 1.0}, {3, 1.0}}, RowSense::Eq, 5.0);
  return m;
}

void expect_same_model(const LpModel& a, const LpModel& b) {
  REQUIRE(a.num_cols() == b.num_cols());
  REQUIRE(a.num_rows() == b.num_rows());
  CHECK(a.sense == b.sense);
  CHECK(a.obj_offset == b.obj_offset);
  for (int j = 0; j < a.num_cols(); ++j) {
    CAPTURE(j);
    CHECK(a.obj[j] == b.obj[j]);
    CHECK(a.lb[j] == b.lb[j]);
    CHECK(a.ub[j] == b.ub[j]);
    CHECK(a.integral[j] == b.integral[j]);
  }
  for (int i = 0; i < a.num_rows(); ++i) {
    CAPTURE(i);
    CHECK(a.row_sense[i] == b.row_sense[i]);
    CHECK(a.rhs[i] == b.rhs[i]);
    REQUIRE(a.row_start[i + 1] == b.row_start[i + 1]);
    for (int k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      CHECK(a.col_index[k] == b.col_index[k]);
      CHECK(a.value[k] == b.value[k]);
    }
  }
}

std::string temp_path(const char* stem) {
  return std::string("/tmp/jumuc_test_") + stem;
}

}  // namespace

TEST_CASE("export is byte-stable and reparses to the same model") {
  LpModel m = sample_model();
  std::string text1 = export_standard(m);
  LpModel back = read_mps(text1);
  expect_same_model(m, back);
  std::string text2 = export_standard(back);
  CHECK(text1 == text2);
}

TEST_CASE("required sections are present") {
  std::string text = export_standard(sample_model());
  for (const char* tag : {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA",
                          "MARKER", "INTORG", "INTEND"})
    CHECK(text.find(tag) != std::string::npos);
}

TEST_CASE("objective offset encodes as the objective-row rhs") {
  LpModel m;
  m.obj_offset = 3.5;
  m.add_col(1.0, 0.0, 1.0);
  std::string text = export_standard(m);
  LpModel back = read_mps(text);
  CHECK(back.obj_offset == 3.5);

  LpSolution a = solve_lp(m), b = solve_lp(back);
  REQUIRE(a.optimal());
  REQUIRE(b.optimal());
  CHECK(a.objective == b.objective);
}

TEST_CASE("maximize sense round trips") {
  LpModel m;
  m.sense = ObjSense::Maximize;
  m.add_col(1.0, 0.0, 2.0);
  LpModel back = read_mps(export_standard(m));
  CHECK(back.sense == ObjSense::Maximize);
}

TEST_CASE("awkward doubles survive the round trip exactly") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  LpModel m;
  for (int j = 0; j < 20; ++j) m.add_col(u(rng), -std::fabs(u(rng)), std::fabs(u(rng)));
  for (int i = 0; i < 10; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < 20; j += 3) terms.emplace_back(j, u(rng) / 1e3);
    m.add_row(terms, RowSense::Le, u(rng));
  }
  expect_same_model(m, read_mps(export_standard(m)));
}

TEST_CASE("solved model and its reparsed twin agree") {
  LpModel m;
  m.add_col(2.0, 0.0, kInf);
  m.add_col(3.0, 0.0, kInf);
  m.add_row({{0, 1.0}, {1, 1.0}}, RowSense::Ge, 4.0);
  m.add_row({{0, 1.0}, {1, 3.0}}, RowSense::Ge, 6.0);
  LpModel back = read_mps(export_standard(m));
  LpSolution a = solve_lp(m), b = solve_lp(back);
  REQUIRE(a.optimal());
  REQUIRE(b.optimal());
  CHECK(a.objective == doctest::Approx(b.objective));
}

TEST_CASE("solution vector reader: canonical names, comments, objective") {
  LpModel m = sample_model();
  std::string path = temp_path("solvec.txt");
  {
    std::ofstream out(path);
    out << "# solver log line\n";
    out << "C1 2.5\n";
    out << "C4 3\n";
    out << "=obj= -8.125\n";
    out << "=bound= -9\n";
  }
  ImportedSolution s = read_solution_vector(path, m);
  REQUIRE((int)s.x.size() == m.num_cols());
  CHECK(s.x[0] == 2.5);
  CHECK(s.x[1] == 0.0);
  CHECK(s.x[3] == 3.0);
  REQUIRE(s.objective.has_value());
  CHECK(*s.objective == -8.125);
  REQUIRE(s.bound.has_value());
  CHECK(*s.bound == -9.0);
  std::remove(path.c_str());
}

TEST_CASE("solution vector reader accepts model column names") {
  LpModel m;
  m.add_col(1.0, 0.0, 1.0, false, "alpha");
  m.add_col(1.0, 0.0, 1.0, false, "beta");
  std::string path = temp_path("solvec_named.txt");
  {
    std::ofstream out(path);
    out << "beta 0.75\n";
  }
  ImportedSolution s = read_solution_vector(path, m);
  CHECK(s.x[0] == 0.0);
  CHECK(s.x[1] == 0.75);
  CHECK_FALSE(s.objective.has_value());
  std::remove(path.c_str());
}

TEST_CASE("unknown column names are rejected") {
  LpModel m;
  m.add_col(1.0, 0.0, 1.0);
  std::string path = temp_path("solvec_bad.txt");
  {
    std::ofstream out(path);
    out << "C7 1.0\n";
  }
  CHECK_THROWS(read_solution_vector(path, m));
  std::remove(path.c_str());
}

TEST_CASE("file round trip") {
  LpModel m = sample_model();
  std::string path = temp_path("model.mps");
  export_standard_to_file(m, path);
  expect_same_model(m, read_mps_file(path));
  std::remove(path.c_str());
}
