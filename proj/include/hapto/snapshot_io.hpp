#pragma once

#include <string>
#include <vector>

#include "hapto/core.hpp"
#include "hapto/mesh.hpp"
#include "hapto/state.hpp"

namespace hapto {

/// Shortest exact decimal form with up to 17 significant digits; parsing it
/// back with strtod recovers the double bit-exactly.
std::string format_g17(double x);

inline constexpr const char* kSnapshotHeader = "cell_id,x,y,area,c,v";

/// One row per cell in mesh order, preceded by a "# t=..." metadata line
/// carrying the snapshot time. Floats use 17 significant digits.
void write_snapshot(const TriMesh& mesh, const SimState& state,
                    const std::string& path);

/// Reads a per-cell field. Two layouts are accepted: a plain list with one
/// float per line (cell-ordered), or a snapshot CSV, in which case `column`
/// must name the column to extract ("c" or "v"). The value count must match
/// `expected_cells`.
CellField read_field_file(const std::string& path, int expected_cells,
                          const std::string& column = "");

/// Plain list layout: one float per line, cell order.
void write_field_file(const CellField& field, const std::string& path);

}  // namespace hapto
