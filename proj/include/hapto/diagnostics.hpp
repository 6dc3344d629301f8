#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hapto/mesh.hpp"
#include "hapto/state.hpp"

namespace hapto {

/// Scalar monitors of one state snapshot.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass_c = 0.0;  // sum_i |cell_i| c_i
  double min_c = 0.0, max_c = 0.0, min_v = 0.0, max_v = 0.0;
  double entropy = 0.0;      // sum_i |cell_i| (c ln c - c), 0 ln 0 := 0
  double grad_energy = 0.0;  // weighted discrete energy of grad sqrt(v)
  double support_fraction_c = 0.0;  // fraction of cells with c > c_tol
  std::int64_t zero_set_violations = 0;  // cells with v0 == 0 but v > 0
  double aux_u_mass = 0.0;  // sum_i |cell_i| ln(1 + sqrt(v) c)
  double front_radius = 0.0;  // filled by the run driver
};

/// Evaluates all monitors except front_radius. `v0` is the tissue field at
/// t = 0, used for the zero-set violation count; the entropy uses the
/// 0 ln 0 = 0 convention and grad_energy the same guarded difference
/// quotient as the solver.
DiagnosticsRecord record(const TriMesh& mesh, const SimState& state,
                         const CellField& v0, double c_tol);

/// Largest centroid distance from `center` among cells with c > c_tol;
/// zero when no cell exceeds the tolerance.
double front_radius(const TriMesh& mesh, const CellField& c, Vec2 center,
                    double c_tol);

/// Area-weighted mean of a cell field.
double field_mean(const TriMesh& mesh, const CellField& f);

inline constexpr const char* kDiagnosticsHeader =
    "t,mass_c,min_c,max_c,min_v,max_v,entropy,grad_energy,"
    "support_fraction_c,zero_set_violations,aux_u_mass,front_radius";

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records);

}  // namespace hapto
