#include "jumuc/mps_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace jumuc {

namespace {

std::string shortest(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string row_id(int i) { return "R" + std::to_string(i + 1); }
std::string col_id(int j) { return "C" + std::to_string(j + 1); }

void field_line(std::string& out, const std::string& f1, const std::string& f2,
                const std::string& f3 = {}, const std::string& f4 = {}) {
  // Classic fixed layout: fields start at columns 2, 5, 15, 25. The value is
  // always the last field on a line so long literals never break alignment.
  std::string line = " ";
  line += f1;
  auto pad_to = [&](size_t c) {
    while (line.size() < c) line += ' ';
  };
  pad_to(4);
  line += f2;
  if (!f3.empty()) {
    pad_to(14);
    line += f3;
  }
  if (!f4.empty()) {
    pad_to(24);
    line += f4;
  }
  out += line;
  out += '\n';
}

}  // namespace

std::string export_standard(const LpModel& model) {
  std::string out;
  out += "NAME          JUMUC\n";
  if (model.sense == ObjSense::Maximize) {
    out += "OBJSENSE\n";
    out += "    MAX\n";
  }
  out += "ROWS\n";
  out += " N  OBJ\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    char s = model.row_sense[i] == RowSense::Ge   ? 'G'
             : model.row_sense[i] == RowSense::Le ? 'L'
                                                  : 'E';
    out += " ";
    out += s;
    out += "  ";
    out += row_id(i);
    out += '\n';
  }

  // Column-wise coefficients require a transpose of the CSR rows.
  int n = model.num_cols();
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  for (int i = 0; i < model.num_rows(); ++i)
    for (int k = model.row_start[i]; k < model.row_start[i + 1]; ++k)
      if (model.value[k] != 0.0)
        cols[model.col_index[k]].push_back({i, model.value[k]});

  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    bool is_int = model.integral[j] != 0;
    if (is_int && !in_int) {
      field_line(out, "", "MARKER" + std::to_string(++marker), "'MARKER'",
                 "'INTORG'");
      in_int = true;
    } else if (!is_int && in_int) {
      field_line(out, "", "MARKER" + std::to_string(++marker), "'MARKER'",
                 "'INTEND'");
      in_int = false;
    }
    if (model.obj[j] != 0.0)
      field_line(out, "", col_id(j), "OBJ", shortest(model.obj[j]));
    for (const auto& [i, v] : cols[j])
      field_line(out, "", col_id(j), row_id(i), shortest(v));
    if (model.obj[j] == 0.0 && cols[j].empty())
      field_line(out, "", col_id(j), "OBJ", "0");
  }
  if (in_int)
    field_line(out, "", "MARKER" + std::to_string(++marker), "'MARKER'",
               "'INTEND'");

  out += "RHS\n";
  for (int i = 0; i < model.num_rows(); ++i)
    if (model.rhs[i] != 0.0)
      field_line(out, "", "RHS1", row_id(i), shortest(model.rhs[i]));
  if (model.obj_offset != 0.0)
    field_line(out, "", "RHS1", "OBJ", shortest(-model.obj_offset));

  out += "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    double lo = model.lb[j], hi = model.ub[j];
    if (lo == 0.0 && hi == kInf) continue;  // default bound
    if (lo == hi) {
      field_line(out, "FX", "BND1", col_id(j), shortest(lo));
      continue;
    }
    if (std::isfinite(lo)) {
      // An explicit LO guards against readers that treat a negative UP with
      // no prior LO as an implicit free lower bound.
      if (lo != 0.0 || (std::isfinite(hi) && hi < 0.0))
        field_line(out, "LO", "BND1", col_id(j), shortest(lo));
    } else {
      field_line(out, "MI", "BND1", col_id(j));
    }
    if (std::isfinite(hi)) {
      field_line(out, "UP", "BND1", col_id(j), shortest(hi));
    } else if (std::isfinite(lo) && lo != 0.0) {
      field_line(out, "PL", "BND1", col_id(j));
    } else if (!std::isfinite(lo)) {
      field_line(out, "PL", "BND1", col_id(j));
    }
  }
  out += "ENDATA\n";
  return out;
}

void export_standard_to_file(const LpModel& model, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << export_standard(model);
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> t;
  std::istringstream is(line);
  std::string w;
  while (is >> w) t.push_back(w);
  return t;
}

double parse_num(const std::string& s, int lineno) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw std::runtime_error("MPS line " + std::to_string(lineno) +
                             ": bad numeric literal '" + s + "'");
  }
}

}  // namespace

LpModel read_mps(const std::string& text) {
  LpModel model;
  std::map<std::string, int> row_of;
  std::map<std::string, int> col_of;
  std::string obj_name;
  enum Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done } sec = None;
  bool in_int = false;
  bool maximize = false;

  // Assemble columns first, convert to CSR at the end.
  std::vector<std::vector<std::pair<int, double>>> rows_acc;

  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto get_col = [&](const std::string& name) {
    auto it = col_of.find(name);
    if (it != col_of.end()) return it->second;
    int j = model.add_col(0.0, 0.0, kInf, in_int, name);
    col_of[name] = j;
    return j;
  };

  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '*') continue;
    if (line[0] != ' ') {
      auto t = tokens(line);
      if (t.empty()) continue;
      const std::string& kw = t[0];
      if (kw == "NAME") sec = None;
      else if (kw == "OBJSENSE") sec = None;
      else if (kw == "ROWS") sec = Rows;
      else if (kw == "COLUMNS") sec = Columns;
      else if (kw == "RHS") sec = Rhs;
      else if (kw == "RANGES") sec = Ranges;
      else if (kw == "BOUNDS") sec = Bounds;
      else if (kw == "ENDATA") { sec = Done; break; }
      else throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                    ": unknown section '" + kw + "'");
      continue;
    }
    auto t = tokens(line);
    if (t.empty()) continue;
    switch (sec) {
      case Rows: {
        if (t.size() != 2)
          throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                   ": malformed row entry");
        if (t[0] == "N") {
          if (obj_name.empty()) obj_name = t[1];
        } else {
          RowSense s = t[0] == "G"   ? RowSense::Ge
                       : t[0] == "L" ? RowSense::Le
                       : t[0] == "E" ? RowSense::Eq
                                     : throw std::runtime_error(
                                           "MPS line " + std::to_string(lineno) +
                                           ": bad row sense '" + t[0] + "'");
          row_of[t[1]] = static_cast<int>(rows_acc.size());
          rows_acc.emplace_back();
          model.row_sense.push_back(s);
          model.rhs.push_back(0.0);
          model.row_name.push_back(t[1]);
        }
        break;
      }
      case Columns: {
        if (t.size() >= 3 && t[1] == "'MARKER'") {
          if (t[2] == "'INTORG'") in_int = true;
          else if (t[2] == "'INTEND'") in_int = false;
          break;
        }
        if (t.size() != 3 && t.size() != 5)
          throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                   ": malformed column entry");
        int j = get_col(t[0]);
        for (size_t k = 1; k + 1 < t.size(); k += 2) {
          double v = parse_num(t[k + 1], lineno);
          if (t[k] == obj_name) {
            model.obj[j] += v;
          } else {
            auto it = row_of.find(t[k]);
            if (it == row_of.end())
              throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                       ": unknown row '" + t[k] + "'");
            if (v != 0.0) rows_acc[it->second].push_back({j, v});
          }
        }
        break;
      }
      case Rhs: {
        for (size_t k = 1; k + 1 < t.size(); k += 2) {
          double v = parse_num(t[k + 1], lineno);
          if (t[k] == obj_name) {
            model.obj_offset = -v;
          } else {
            auto it = row_of.find(t[k]);
            if (it == row_of.end())
              throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                       ": unknown RHS row '" + t[k] + "'");
            model.rhs[it->second] = v;
          }
        }
        break;
      }
      case Ranges:
        throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                 ": RANGES not supported");
      case Bounds: {
        if (t.size() < 3)
          throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                   ": malformed bound entry");
        int j = get_col(t[2]);
        const std::string& bt = t[0];
        double v = (t.size() >= 4) ? parse_num(t[3], lineno) : 0.0;
        if (bt == "LO") model.lb[j] = v;
        else if (bt == "UP") model.ub[j] = v;
        else if (bt == "FX") { model.lb[j] = v; model.ub[j] = v; }
        else if (bt == "MI") model.lb[j] = -kInf;
        else if (bt == "PL") model.ub[j] = kInf;
        else if (bt == "BV") { model.lb[j] = 0.0; model.ub[j] = 1.0; model.integral[j] = 1; }
        else throw std::runtime_error("MPS line " + std::to_string(lineno) +
                                      ": bad bound type '" + bt + "'");
        break;
      }
      case None:
        if (t.size() == 1 && t[0] == "MAX") maximize = true;
        break;
      case Done:
        break;
    }
  }
  if (sec != Done)
    throw std::runtime_error("MPS input missing ENDATA");

  model.sense = maximize ? ObjSense::Maximize : ObjSense::Minimize;
  for (auto& r : rows_acc) {
    for (const auto& [j, v] : r) {
      model.col_index.push_back(j);
      model.value.push_back(v);
    }
    model.row_start.push_back(static_cast<int>(model.col_index.size()));
  }
  return model;
}

LpModel read_mps_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return read_mps(ss.str());
}

ImportedSolution read_solution_vector(const std::string& path,
                                      const LpModel& model) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read solution file " + path);
  // Accept both the positional id used in the exported MPS and the model's
  // own column name.
  std::map<std::string, int> col_of;
  for (int j = 0; j < model.num_cols(); ++j) {
    col_of["C" + std::to_string(j + 1)] = j;
    if (!model.col_name[j].empty()) col_of[model.col_name[j]] = j;
  }
  ImportedSolution sol;
  sol.x.assign(model.num_cols(), 0.0);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto t = tokens(line);
    if (t.empty()) continue;
    if (t[0] == "=obj=" && t.size() >= 2) {
      sol.objective = parse_num(t[1], lineno);
      continue;
    }
    if (t[0] == "=bound=" && t.size() >= 2) {
      sol.bound = parse_num(t[1], lineno);
      continue;
    }
    if (t.size() != 2)
      throw std::runtime_error("solution line " + std::to_string(lineno) +
                               ": expected '<name> <value>'");
    auto it = col_of.find(t[0]);
    if (it == col_of.end())
      throw std::runtime_error("solution line " + std::to_string(lineno) +
                               ": unknown column '" + t[0] + "'");
    sol.x[it->second] = parse_num(t[1], lineno);
  }
  return sol;
}

}  // namespace jumuc
