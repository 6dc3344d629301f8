#include "hapto/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "hapto/snapshot_io.hpp"

namespace hapto {

DiagnosticsRecord record(const TriMesh& mesh, const SimState& state,
                         const CellField& v0, double c_tol) {
  const int n = mesh.n_cells();
  if (static_cast<int>(state.c.size()) != n ||
      static_cast<int>(state.v.size()) != n ||
      static_cast<int>(v0.size()) != n)
    throw Error("diagnostics: field sizes do not match mesh");

  DiagnosticsRecord r;
  r.t = state.t;
  r.min_c = std::numeric_limits<double>::max();
  r.max_c = -r.min_c;
  r.min_v = r.min_c;
  r.max_v = r.max_c;

  int supported = 0;
  for (int i = 0; i < n; ++i) {
    const double a = mesh.cell_areas[i];
    const double c = state.c[i];
    const double v = state.v[i];
    r.mass_c += a * c;
    r.min_c = std::min(r.min_c, c);
    r.max_c = std::max(r.max_c, c);
    r.min_v = std::min(r.min_v, v);
    r.max_v = std::max(r.max_v, v);
    if (c > 0.0) r.entropy += a * (c * std::log(c) - c);
    if (c > c_tol) ++supported;
    if (v0[i] == 0.0 && v > 0.0) ++r.zero_set_violations;
    r.aux_u_mass += a * std::log1p(std::sqrt(v) * c);
  }
  r.support_fraction_c = static_cast<double>(supported) / n;

  // Edge quadrature for the weighted gradient energy of sqrt(v): each
  // interior edge carries ((sqrt(v_j)-sqrt(v_i))/dist)^2, the mean of
  // 1/(1+v)^2 over the two cells, and the area weight
  // (|cell_i|+|cell_j|)/(2 nbar) with nbar = 2 E_int / N_cells.
  const int n_int = mesh.n_interior_edges();
  if (n_int > 0) {
    const double nbar = 2.0 * n_int / static_cast<double>(n);
    const double guard = kGradGuardScale * mesh.domain_diameter();
    for (const Edge& e : mesh.edges) {
      if (!e.interior()) continue;
      const int i = e.cell_left, j = e.cell_right;
      const double dist = norm(mesh.cell_centroids[j] - mesh.cell_centroids[i]);
      if (dist <= guard) continue;
      const double ds = (std::sqrt(state.v[j]) - std::sqrt(state.v[i])) / dist;
      const double wi = 1.0 + state.v[i];
      const double wj = 1.0 + state.v[j];
      const double chi_inv = 0.5 * (1.0 / (wi * wi) + 1.0 / (wj * wj));
      const double w_area = (mesh.cell_areas[i] + mesh.cell_areas[j]) / (2.0 * nbar);
      r.grad_energy += ds * ds * chi_inv * w_area;
    }
  }
  return r;
}

double front_radius(const TriMesh& mesh, const CellField& c, Vec2 center,
                    double c_tol) {
  double radius = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i)
    if (c[i] > c_tol)
      radius = std::max(radius, norm(mesh.cell_centroids[i] - center));
  return radius;
}

double field_mean(const TriMesh& mesh, const CellField& f) {
  double m = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) m += mesh.cell_areas[i] * f[i];
  return m / mesh.total_area();
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open diagnostics file for writing: " + path);
  out << kDiagnosticsHeader << "\n";
  for (const DiagnosticsRecord& r : records) {
    out << format_g17(r.t) << ',' << format_g17(r.mass_c) << ','
        << format_g17(r.min_c) << ',' << format_g17(r.max_c) << ','
        << format_g17(r.min_v) << ',' << format_g17(r.max_v) << ','
        << format_g17(r.entropy) << ',' << format_g17(r.grad_energy) << ','
        << format_g17(r.support_fraction_c) << ',' << r.zero_set_violations
        << ',' << format_g17(r.aux_u_mass) << ',' << format_g17(r.front_radius)
        << "\n";
  }
  if (!out) throw Error("write failed for diagnostics file: " + path);
}

}  // namespace hapto
