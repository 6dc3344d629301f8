#pragma once

#include <cstdint>

#include "hapto/mesh.hpp"

namespace hapto {

/// Force-equilibrium triangulator for the unit square with uniform target
/// edge length: points start on a jittered hexagonal lattice and relax
/// under edge spring forces with Delaunay retriangulation each sweep.
/// Deterministic for a fixed seed. Throws Error if the relaxed point set
/// does not yield a valid triangulation with quality >= 0.3 within the
/// iteration budget.
TriMesh generate_unit_square_mesh(double target_edge_length,
                                  int relaxation_iters = 100,
                                  std::uint64_t seed = 0);

}  // namespace hapto
