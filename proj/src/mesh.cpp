#include "hapto/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "hapto/snapshot_io.hpp"

namespace hapto {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Outward normal of the directed segment a->b for a CCW polygon.
Vec2 outward_normal(Vec2 a, Vec2 b, double len) {
  Vec2 d = b - a;
  return {d.y / len, -d.x / len};
}

}  // namespace

int TriMesh::n_interior_edges() const {
  int n = 0;
  for (const Edge& e : edges) n += e.interior() ? 1 : 0;
  return n;
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (double a : cell_areas) s += a;
  return s;
}

double TriMesh::domain_diameter() const {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Vec2& p : vertices) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

double TriMesh::min_quality() const {
  double q = std::numeric_limits<double>::max();
  for (const auto& cell : cells) {
    q = std::min(q, triangle_quality(vertices[cell[0]], vertices[cell[1]],
                                     vertices[cell[2]]));
  }
  return q;
}

int TriMesh::guarded_edge_components() const {
  const double guard = kGradGuardScale * domain_diameter();
  int n = 0;
  for (const Edge& e : edges) {
    if (!e.interior()) continue;
    Vec2 d = cell_centroids[e.cell_right] - cell_centroids[e.cell_left];
    if (std::abs(d.x) <= guard || std::abs(d.y) <= guard) ++n;
  }
  return n;
}

double triangle_quality(Vec2 a, Vec2 b, Vec2 c) {
  const double la = norm(c - b);
  const double lb = norm(a - c);
  const double lc = norm(b - a);
  const double denom = la * lb * lc;
  if (denom <= 0.0) return 0.0;
  return (lb + lc - la) * (lc + la - lb) * (la + lb - lc) / denom;
}

TriMesh build_connectivity(std::vector<Vec2> vertices,
                           std::vector<std::array<int, 3>> cells) {
  TriMesh mesh;
  const int nv = static_cast<int>(vertices.size());
  const int nc = static_cast<int>(cells.size());

  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  mesh.cell_areas.resize(nc);
  mesh.cell_centroids.resize(nc);
  mesh.adjacency.assign(nc, {});
  mesh.cell_edges.assign(nc, {});

  std::map<std::array<int, 3>, int> seen_cells;
  for (int i = 0; i < nc; ++i) {
    const auto& cell = mesh.cells[i];
    for (int k = 0; k < 3; ++k) {
      if (cell[k] < 0 || cell[k] >= nv)
        throw Error("cell " + std::to_string(i) + " references vertex " +
                    std::to_string(cell[k]) + " outside [0, " +
                    std::to_string(nv) + ")");
    }
    if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2])
      throw Error("cell " + std::to_string(i) + " has repeated vertices");

    std::array<int, 3> key = cell;
    std::sort(key.begin(), key.end());
    auto [it, fresh] = seen_cells.emplace(key, i);
    if (!fresh)
      throw Error("cell " + std::to_string(i) + " duplicates cell " +
                  std::to_string(it->second));

    const Vec2 a = mesh.vertices[cell[0]];
    const Vec2 b = mesh.vertices[cell[1]];
    const Vec2 c = mesh.vertices[cell[2]];
    const double area = signed_area(a, b, c);
    if (area <= 0.0)
      throw Error("cell " + std::to_string(i) +
                  " is inverted or degenerate (signed area " +
                  std::to_string(area) + "); vertices must be CCW");
    mesh.cell_areas[i] = area;
    mesh.cell_centroids[i] = {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  }

  // First traversal of an undirected edge fixes cell_left and the stored
  // orientation; a conforming CCW partner must traverse it reversed.
  std::map<std::pair<int, int>, int> edge_of;
  for (int i = 0; i < nc; ++i) {
    const auto& cell = mesh.cells[i];
    for (int k = 0; k < 3; ++k) {
      const int a = cell[k];
      const int b = cell[(k + 1) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.v0 = a;
        e.v1 = b;
        e.cell_left = i;
        e.length = norm(mesh.vertices[b] - mesh.vertices[a]);
        e.normal = outward_normal(mesh.vertices[a], mesh.vertices[b], e.length);
        edge_of.emplace(key, mesh.n_edges());
        mesh.edges.push_back(e);
      } else {
        Edge& e = mesh.edges[it->second];
        if (e.cell_right != kNoCell)
          throw Error("non-manifold edge (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + ") shared by cells " +
                      std::to_string(e.cell_left) + ", " +
                      std::to_string(e.cell_right) + " and " +
                      std::to_string(i));
        if (e.v0 != b || e.v1 != a)
          throw Error("cells " + std::to_string(e.cell_left) + " and " +
                      std::to_string(i) + " traverse edge (" +
                      std::to_string(key.first) + "," +
                      std::to_string(key.second) + ") in the same direction");
        e.cell_right = i;
      }
    }
  }

  for (int k = 0; k < mesh.n_edges(); ++k) {
    const Edge& e = mesh.edges[k];
    mesh.cell_edges[e.cell_left].push_back(k);
    if (e.interior()) {
      mesh.cell_edges[e.cell_right].push_back(k);
      mesh.adjacency[e.cell_left].push_back(e.cell_right);
      mesh.adjacency[e.cell_right].push_back(e.cell_left);
    }
  }
  for (auto& v : mesh.adjacency) std::sort(v.begin(), v.end());
  for (auto& v : mesh.cell_edges) std::sort(v.begin(), v.end());

  return mesh;
}

TriMesh two_triangle_square() {
  std::vector<Vec2> vertices{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::array<int, 3>> cells{{0, 1, 2}, {0, 2, 3}};
  return build_connectivity(std::move(vertices), std::move(cells));
}

void check_invariants(const TriMesh& mesh,
                      std::optional<double> expected_total_area) {
  for (int i = 0; i < mesh.n_cells(); ++i) {
    if (!(mesh.cell_areas[i] > 0.0))
      throw Error("cell " + std::to_string(i) + " has non-positive area");
    if (mesh.adjacency[i].size() > 3)
      throw Error("cell " + std::to_string(i) + " has more than 3 neighbors");
    if (mesh.cell_edges[i].size() != 3)
      throw Error("cell " + std::to_string(i) + " does not own 3 edges");
  }

  if (expected_total_area &&
      std::abs(mesh.total_area() - *expected_total_area) > 1e-10)
    throw Error("total area " + std::to_string(mesh.total_area()) +
                " deviates from expected " +
                std::to_string(*expected_total_area));

  // Euler formula, counting the outer face.
  const long euler = static_cast<long>(mesh.n_vertices()) - mesh.n_edges() +
                     mesh.n_cells() + 1;
  if (euler != 2)
    throw Error("Euler formula violated: V - E + F = " + std::to_string(euler));

  for (int k = 0; k < mesh.n_edges(); ++k) {
    const Edge& e = mesh.edges[k];
    if (std::abs(norm(e.normal) - 1.0) > 1e-12)
      throw Error("edge " + std::to_string(k) + " normal is not unit length");
    const Vec2 a = mesh.vertices[e.v0];
    const Vec2 b = mesh.vertices[e.v1];
    const double len = norm(b - a);
    if (std::abs(len - e.length) > 1e-12 * (1.0 + len))
      throw Error("edge " + std::to_string(k) + " stored length mismatch");
    const Vec2 n{(b.y - a.y) / len, -(b.x - a.x) / len};
    if (std::abs(n.x - e.normal.x) > 1e-12 || std::abs(n.y - e.normal.y) > 1e-12)
      throw Error("edge " + std::to_string(k) + " stored normal mismatch");
    if (e.interior()) {
      // Seen from cell_right the edge runs b->a; its outward normal must be
      // exactly the negation of the stored one.
      const Vec2 nr{(a.y - b.y) / len, -(a.x - b.x) / len};
      if (nr.x != -n.x || nr.y != -n.y)
        throw Error("edge " + std::to_string(k) +
                    " normals seen from the two cells are not equal-and-opposite");
    }
  }

  // Each interior edge must appear in exactly two cells' adjacency, each
  // boundary edge in exactly one cell's edge list.
  std::vector<int> owners(mesh.n_edges(), 0);
  for (int i = 0; i < mesh.n_cells(); ++i)
    for (int k : mesh.cell_edges[i]) owners[k]++;
  for (int k = 0; k < mesh.n_edges(); ++k) {
    const int expect = mesh.edges[k].interior() ? 2 : 1;
    if (owners[k] != expect)
      throw Error("edge " + std::to_string(k) + " owned by " +
                  std::to_string(owners[k]) + " cells, expected " +
                  std::to_string(expect));
  }
}

void write_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open mesh file for writing: " + path);
  out << mesh.n_vertices() << " " << mesh.n_cells() << "\n";
  for (const Vec2& p : mesh.vertices)
    out << format_g17(p.x) << " " << format_g17(p.y) << "\n";
  for (const auto& c : mesh.cells)
    out << c[0] << " " << c[1] << " " << c[2] << "\n";
  if (!out) throw Error("write failed for mesh file: " + path);
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file: " + path);
  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 3 || nc < 1)
    throw Error("malformed mesh header in " + path);
  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x >> vertices[i].y))
      throw Error("malformed vertex " + std::to_string(i) + " in " + path);
  std::vector<std::array<int, 3>> cells(nc);
  for (int i = 0; i < nc; ++i)
    if (!(in >> cells[i][0] >> cells[i][1] >> cells[i][2]))
      throw Error("malformed cell " + std::to_string(i) + " in " + path);
  return build_connectivity(std::move(vertices), std::move(cells));
}

}  // namespace hapto
