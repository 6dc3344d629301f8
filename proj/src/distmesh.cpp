#include "hapto/distmesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace hapto {

namespace {

constexpr double kFscale = 1.2;   // desired-over-current bar length ratio
constexpr double kStepSize = 0.2; // pseudo-time step of the force iteration
constexpr double kMinQuality = 0.3;

// Signed distance to the unit square boundary, negative inside.
double sdf(double x, double y) {
  return -std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y));
}

struct BWTriangle {
  int a, b, c;
  double ccx, ccy, rr;  // circumcenter and squared circumradius
  bool alive;
};

bool circumcircle(const std::vector<Vec2>& p, int ia, int ib, int ic,
                  double& ccx, double& ccy, double& rr) {
  const Vec2 A = p[ia], B = p[ib], C = p[ic];
  const double d =
      2.0 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
  if (d == 0.0) return false;
  const double a2 = A.x * A.x + A.y * A.y;
  const double b2 = B.x * B.x + B.y * B.y;
  const double c2 = C.x * C.x + C.y * C.y;
  ccx = (a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d;
  ccy = (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d;
  const double dx = A.x - ccx, dy = A.y - ccy;
  rr = dx * dx + dy * dy;
  return true;
}

// Incremental Bowyer-Watson triangulation. Input points must be distinct;
// ties are broken toward "outside" so that near-cocircular noise cannot
// poison the cavity. Returns CCW triangles.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec2> p = pts;
  // Super-triangle well clear of the unit square.
  p.push_back({-40.0, -40.0});
  p.push_back({41.0, -40.0});
  p.push_back({0.5, 60.0});

  std::vector<BWTriangle> tris;
  {
    BWTriangle t{n, n + 1, n + 2, 0, 0, 0, true};
    circumcircle(p, t.a, t.b, t.c, t.ccx, t.ccy, t.rr);
    tris.push_back(t);
  }

  std::vector<int> bad;
  std::vector<std::pair<int, int>> hull;
  for (int ip = 0; ip < n; ++ip) {
    const Vec2 q = p[ip];
    bad.clear();
    for (int it = 0; it < static_cast<int>(tris.size()); ++it) {
      const BWTriangle& t = tris[it];
      if (!t.alive) continue;
      const double dx = q.x - t.ccx, dy = q.y - t.ccy;
      if (dx * dx + dy * dy < t.rr - 1e-12 * (t.rr + 1.0)) bad.push_back(it);
    }
    // Cavity boundary: directed edges of bad triangles that occur once.
    hull.clear();
    for (int it : bad) {
      const BWTriangle& t = tris[it];
      const std::pair<int, int> es[3] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
      for (const auto& e : es) {
        auto rev = std::find(hull.begin(), hull.end(),
                             std::make_pair(e.second, e.first));
        if (rev != hull.end())
          hull.erase(rev);
        else
          hull.push_back(e);
      }
      tris[it].alive = false;
    }
    for (const auto& e : hull) {
      BWTriangle t{e.first, e.second, ip, 0, 0, 0, true};
      if (!circumcircle(p, t.a, t.b, t.c, t.ccx, t.ccy, t.rr)) continue;
      tris.push_back(t);
    }
  }

  std::vector<std::array<int, 3>> out;
  for (const BWTriangle& t : tris) {
    if (!t.alive || t.a >= n || t.b >= n || t.c >= n) continue;
    const Vec2 A = p[t.a], B = p[t.b], C = p[t.c];
    const double cross =
        (B.x - A.x) * (C.y - A.y) - (C.x - A.x) * (B.y - A.y);
    if (cross > 0)
      out.push_back({t.a, t.b, t.c});
    else
      out.push_back({t.a, t.c, t.b});
  }
  return out;
}

// Keeps triangles whose centroid lies inside the domain.
std::vector<std::array<int, 3>> interior_triangles(
    const std::vector<Vec2>& pts, const std::vector<std::array<int, 3>>& tris,
    double geps) {
  std::vector<std::array<int, 3>> kept;
  for (const auto& t : tris) {
    const double cx = (pts[t[0]].x + pts[t[1]].x + pts[t[2]].x) / 3.0;
    const double cy = (pts[t[0]].y + pts[t[1]].y + pts[t[2]].y) / 3.0;
    if (sdf(cx, cy) < -geps) kept.push_back(t);
  }
  return kept;
}

void project_to_boundary(Vec2& pt) {
  const double d = sdf(pt.x, pt.y);
  if (d <= 0.0) return;
  const double delta = 1e-7;
  const double gx = (sdf(pt.x + delta, pt.y) - d) / delta;
  const double gy = (sdf(pt.x, pt.y + delta) - d) / delta;
  const double g2 = gx * gx + gy * gy;
  if (g2 == 0.0) return;
  pt.x -= d * gx / g2;
  pt.y -= d * gy / g2;
}

double snap01(double x) {
  if (std::abs(x) < 1e-9) return 0.0;
  if (std::abs(x - 1.0) < 1e-9) return 1.0;
  return x;
}

}  // namespace

TriMesh generate_unit_square_mesh(double target_edge_length,
                                  int relaxation_iters, std::uint64_t seed) {
  const double h = target_edge_length;
  if (!(h > 0.0) || h > 0.5)
    throw Error("target edge length must lie in (0, 0.5], got " +
                std::to_string(h));
  if (relaxation_iters < 1)
    throw Error("relaxation iteration budget must be positive");

  const double geps = 1e-3 * h;
  const double dptol = 1e-3;

  // Hexagonal seed lattice; interior points are jittered to break the
  // lattice's cocircular ties before the first triangulation.
  std::vector<Vec2> pts;
  std::vector<bool> fixed;
  const Vec2 corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (const Vec2& c : corners) {
    pts.push_back(c);
    fixed.push_back(true);
  }
  std::mt19937_64 rng(seed);
  const double rowstep = h * std::sqrt(3.0) / 2.0;
  const int nrows = static_cast<int>(std::floor(1.0 / rowstep + 1e-9)) + 1;
  const int ncols = static_cast<int>(std::floor(1.0 / h + 1e-9)) + 1;
  for (int j = 0; j <= nrows; ++j) {
    const double y = snap01(j * rowstep);
    if (y > 1.0) break;
    const double off = (j % 2 == 0) ? 0.0 : 0.5 * h;
    for (int i = 0; i <= ncols; ++i) {
      const double x = snap01(i * h + off);
      if (x > 1.0) break;
      bool is_corner = false;
      for (const Vec2& c : corners)
        if (std::abs(x - c.x) < 1e-9 && std::abs(y - c.y) < 1e-9)
          is_corner = true;
      if (is_corner) continue;
      Vec2 q{x, y};
      if (sdf(x, y) < -geps) {
        // Explicit 53-bit mapping keeps the jitter identical across
        // standard library implementations.
        const double jx = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
        const double jy = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
        q.x += 0.05 * h * jx;
        q.y += 0.05 * h * jy;
        project_to_boundary(q);
      }
      pts.push_back(q);
      fixed.push_back(false);
    }
  }

  const int np = static_cast<int>(pts.size());
  std::vector<Vec2> force(np);
  std::vector<std::array<int, 3>> tris;

  for (int iter = 0; iter < relaxation_iters; ++iter) {
    tris = interior_triangles(pts, delaunay(pts), geps);

    std::vector<std::pair<int, int>> bars;
    bars.reserve(3 * tris.size());
    for (const auto& t : tris)
      for (int k = 0; k < 3; ++k)
        bars.emplace_back(std::min(t[k], t[(k + 1) % 3]),
                          std::max(t[k], t[(k + 1) % 3]));
    std::sort(bars.begin(), bars.end());
    bars.erase(std::unique(bars.begin(), bars.end()), bars.end());

    double sum_l2 = 0.0;
    for (const auto& b : bars) {
      const Vec2 d = pts[b.second] - pts[b.first];
      sum_l2 += dot(d, d);
    }
    const double l0 = kFscale * std::sqrt(sum_l2 / bars.size());

    std::fill(force.begin(), force.end(), Vec2{});
    for (const auto& b : bars) {
      const Vec2 d = pts[b.second] - pts[b.first];
      const double len = norm(d);
      const double f = std::max(l0 - len, 0.0);
      if (f == 0.0 || len == 0.0) continue;
      const Vec2 fv = (f / len) * d;
      force[b.first].x -= fv.x;
      force[b.first].y -= fv.y;
      force[b.second].x += fv.x;
      force[b.second].y += fv.y;
    }

    double max_interior_move = 0.0;
    for (int i = 0; i < np; ++i) {
      if (fixed[i]) continue;
      const Vec2 mv = kStepSize * force[i];
      pts[i] = pts[i] + mv;
      const bool was_interior = sdf(pts[i].x, pts[i].y) < -geps;
      project_to_boundary(pts[i]);
      if (was_interior) max_interior_move = std::max(max_interior_move, norm(mv));
    }
    if (max_interior_move < dptol * h) break;
  }

  tris = interior_triangles(pts, delaunay(pts), geps);
  if (tris.empty()) throw Error("mesh relaxation produced no triangles");

  // Compact away points that ended up unused.
  std::vector<int> remap(np, -1);
  std::vector<Vec2> used;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k)
      if (remap[t[k]] < 0) {
        remap[t[k]] = static_cast<int>(used.size());
        used.push_back(pts[t[k]]);
      }
  for (auto& t : tris)
    for (int k = 0; k < 3; ++k) t[k] = remap[t[k]];

  TriMesh mesh = build_connectivity(std::move(used), std::move(tris));
  check_invariants(mesh, 1.0);
  const double q = mesh.min_quality();
  if (q < kMinQuality)
    throw Error("relaxation left a triangle of quality " + std::to_string(q) +
                " below the floor " + std::to_string(kMinQuality) +
                " within the iteration budget");
  return mesh;
}

}  // namespace hapto
