#include "hapto/snapshot_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hapto {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_snapshot(const TriMesh& mesh, const SimState& state,
                    const std::string& path) {
  if (static_cast<int>(state.c.size()) != mesh.n_cells() ||
      static_cast<int>(state.v.size()) != mesh.n_cells())
    throw Error("snapshot state size does not match mesh cell count");
  std::ofstream out(path);
  if (!out) throw Error("cannot open snapshot file for writing: " + path);
  out << "# t=" << format_g17(state.t) << "\n";
  out << kSnapshotHeader << "\n";
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const Vec2 p = mesh.cell_centroids[i];
    out << i << ',' << format_g17(p.x) << ',' << format_g17(p.y) << ','
        << format_g17(mesh.cell_areas[i]) << ',' << format_g17(state.c[i])
        << ',' << format_g17(state.v[i]) << "\n";
  }
  if (!out) throw Error("write failed for snapshot file: " + path);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, const std::string& where) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin) throw Error("cannot parse float '" + tok + "' in " + where);
  return x;
}

}  // namespace

CellField read_field_file(const std::string& path, int expected_cells,
                          const std::string& column) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open field file: " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw Error("field file is empty: " + path);

  CellField field;
  if (lines.front().rfind("cell_id,", 0) == 0) {
    const auto header = split_csv(lines.front());
    int col = -1;
    for (size_t k = 0; k < header.size(); ++k)
      if (header[k] == column) col = static_cast<int>(k);
    if (column.empty())
      throw Error("snapshot CSV " + path +
                  " requires a column selection (\"c\" or \"v\")");
    if (col < 0)
      throw Error("column '" + column + "' not found in " + path);
    for (size_t i = 1; i < lines.size(); ++i) {
      const auto row = split_csv(lines[i]);
      if (row.size() != header.size())
        throw Error("row " + std::to_string(i) + " of " + path +
                    " has wrong column count");
      field.push_back(parse_double(row[col], path));
    }
  } else {
    for (const auto& l : lines) field.push_back(parse_double(l, path));
  }

  if (static_cast<int>(field.size()) != expected_cells)
    throw Error("field file " + path + " holds " +
                std::to_string(field.size()) + " values, mesh has " +
                std::to_string(expected_cells) + " cells");
  return field;
}

void write_field_file(const CellField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open field file for writing: " + path);
  for (double x : field) out << format_g17(x) << "\n";
  if (!out) throw Error("write failed for field file: " + path);
}

}  // namespace hapto
