#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hapto/core.hpp"

namespace hapto {

inline constexpr int kNoCell = -1;

/// Oriented edge record. The unit normal points from `cell_left` into
/// `cell_right`; boundary edges have cell_right == kNoCell and an outward
/// normal.
struct Edge {
  int v0 = 0, v1 = 0;  // vertex indices, in cell_left's traversal order
  int cell_left = kNoCell;
  int cell_right = kNoCell;
  double length = 0.0;
  Vec2 normal;

  bool interior() const { return cell_right != kNoCell; }
};

/// Conforming triangular mesh with cell-centered connectivity.
///
/// Immutable after construction; safe to share read-only between threads.
/// Cells are counterclockwise vertex triples; each cell's incident edge
/// list and neighbor list are sorted ascending so that per-cell
/// accumulations have a fixed order.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<Edge> edges;
  std::vector<double> cell_areas;
  std::vector<Vec2> cell_centroids;
  std::vector<std::vector<int>> adjacency;   // neighbor cell ids
  std::vector<std::vector<int>> cell_edges;  // incident edge ids

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_interior_edges() const;
  double total_area() const;
  double domain_diameter() const;  // bounding-box diagonal
  double min_quality() const;      // min over cells of 2 r_in / r_circ
  /// Interior edges with a centroid-offset component below the gradient
  /// guard; their guarded quotient component evaluates to zero.
  int guarded_edge_components() const;
};

/// Derives edges, normals, areas, centroids and adjacency from raw vertex
/// and cell lists. Rejects clockwise or degenerate cells, non-manifold
/// edges, duplicate cells and out-of-range indices, naming the offending
/// cell.
TriMesh build_connectivity(std::vector<Vec2> vertices,
                           std::vector<std::array<int, 3>> cells);

/// Unit square split along the diagonal (0,0)-(1,1); minimal fixture mesh.
TriMesh two_triangle_square();

/// Structural checks: positive areas, Euler formula, unit normals that
/// match a recomputation from the vertex pairs, consistent adjacency.
/// When `expected_total_area` is given, the cell areas must sum to it
/// within 1e-10. Throws Error on the first violation.
void check_invariants(const TriMesh& mesh,
                      std::optional<double> expected_total_area = {});

/// Text format: header "nv nc", nv lines "x y", nc lines "i j k" (0-based,
/// CCW). Coordinates are written with 17 significant digits so that a
/// write/read cycle is bit-exact.
void write_mesh(const TriMesh& mesh, const std::string& path);
TriMesh read_mesh(const std::string& path);

/// Triangle quality 2 r_in / r_circ; equals 1 for equilateral triangles.
double triangle_quality(Vec2 a, Vec2 b, Vec2 c);

}  // namespace hapto
