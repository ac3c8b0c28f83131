// Fixed-format MPS writer/reader and a solution-vector importer.
//
// The writer emits canonical generated names (OBJ, R1.., C1..), one
// coefficient per line, and shortest-round-trip numeric literals, so the
// output is byte-stable across runs and re-parsing reproduces the model
// exactly. Integer columns are wrapped in the usual INTORG/INTEND markers.
//
// External-solver contract (see README): a command named by the
// JUMUC_EXTERNAL_SOLVER environment variable is invoked as
//   $JUMUC_EXTERNAL_SOLVER model.mps solution.txt
// and must write one "<column-name> <value>" line per nonzero column of an
// optimal solution. Lines starting with '#' are ignored; optional "=obj="
// and "=bound=" lines carry the external objective and proven bound.
#pragma once

#include <optional>
#include <string>

#include "jumuc/lp_model.hpp"

namespace jumuc {

std::string export_standard(const LpModel& model);
void export_standard_to_file(const LpModel& model, const std::string& path);

LpModel read_mps(const std::string& text);
LpModel read_mps_file(const std::string& path);

struct ImportedSolution {
  std::vector<double> x;
  std::optional<double> objective;
  std::optional<double> bound;
};

// Parses a solution vector written by an external solver against the
// canonical column names of `model`; missing columns default to zero.
ImportedSolution read_solution_vector(const std::string& path,
                                      const LpModel& model);

}  // namespace jumuc
