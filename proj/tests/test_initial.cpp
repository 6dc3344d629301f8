#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hapto/distmesh.hpp"
#include "hapto/initial.hpp"
#include "hapto/mesh.hpp"

using namespace hapto;

namespace {

InitSpec gaussian_spec() {
  InitSpec s;
  s.kind = InitKind::GaussianC;
  s.center = {0.5, 0.5};
  s.width = 0.08;
  return s;
}

}  // namespace

TEST_CASE("gaussian field equals the direct formula at the nearest centroid") {
  const TriMesh mesh = generate_unit_square_mesh(0.1, 100, 0);
  const CellField c = build_field(mesh, gaussian_spec());

  int nearest = 0;
  double best = 1e300;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const double d = norm(mesh.cell_centroids[i] - Vec2{0.5, 0.5});
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  const double expect = std::exp(-best * best / (2.0 * 0.08 * 0.08));
  CHECK(c[nearest] == doctest::Approx(expect).epsilon(1e-15));

  // The maximum must sit at the centroid closest to the center.
  int argmax = 0;
  for (int i = 1; i < mesh.n_cells(); ++i)
    if (c[i] > c[argmax]) argmax = i;
  CHECK(argmax == nearest);
}

TEST_CASE("gaussian field at the far corner") {
  // exp(-0.5 / (2 * 0.08^2)) = exp(-39.0625), about 1.1e-17.
  std::vector<Vec2> v{{0, 0}, {0.02, 0}, {0, 0.02}};
  const TriMesh mesh = build_connectivity(v, {{0, 1, 2}});
  InitSpec s = gaussian_spec();
  const CellField c = build_field(mesh, s);
  const Vec2 d = mesh.cell_centroids[0] - Vec2{0.5, 0.5};
  const double expect = std::exp(-(d.x * d.x + d.y * d.y) / (2.0 * 0.0064));
  CHECK(c[0] == doctest::Approx(expect).epsilon(1e-15));
  CHECK(std::exp(-39.0625) == doctest::Approx(1.1e-17).epsilon(0.02));
}

TEST_CASE("uniform random field: determinism, range, frozen mean") {
  const TriMesh mesh = generate_unit_square_mesh(0.04, 100, 0);
  REQUIRE(mesh.n_cells() >= 1000);

  InitSpec s;
  s.kind = InitKind::UniformRandomV;
  s.seed = 42;
  const CellField a = build_field(mesh, s);
  const CellField b = build_field(mesh, s);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i] > 0.0);
    CHECK(a[i] < 1.0);
  }

  double mean = 0.0;
  for (double x : a) mean += x;
  mean /= a.size();
  CHECK(mean > 0.45);
  CHECK(mean < 0.55);
  // Regression value from the first verified run (seed 42, h=0.04, 1374 cells).
  CHECK(mean == doctest::Approx(0.50065323352812963).epsilon(1e-14));

  s.seed = 43;
  const CellField c = build_field(mesh, s);
  CHECK(c[0] != a[0]);
}

TEST_CASE("uniform_open01 stays strictly inside (0,1)") {
  CHECK(uniform_open01(0) > 0.0);
  CHECK(uniform_open01(~0ull) < 1.0);
  CHECK(uniform_open01(1ull << 63) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("annular gap field is exactly zero inside the annulus") {
  const TriMesh mesh = generate_unit_square_mesh(0.05, 100, 0);
  InitSpec s;
  s.kind = InitKind::AnnularGapV;
  s.center = {0.5, 0.5};
  s.r_inner = 0.15;
  s.r_outer = 0.3;
  s.value = 0.8;
  const CellField v = build_field(mesh, s);
  int inside = 0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const double r = norm(mesh.cell_centroids[i] - s.center);
    if (r >= s.r_inner && r <= s.r_outer) {
      CHECK(v[i] == 0.0);
      ++inside;
    } else {
      CHECK(v[i] == 0.8);
    }
  }
  CHECK(inside > 0);
}

TEST_CASE("constant field") {
  const TriMesh mesh = two_triangle_square();
  InitSpec s;
  s.kind = InitKind::Constant;
  s.value = 0.37;
  const CellField f = build_field(mesh, s);
  CHECK(f[0] == 0.37);
  CHECK(f[1] == 0.37);
}

TEST_CASE("from_file: plain list round-trip and wrong-count rejection") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "hapto_field.txt";
  {
    std::ofstream out(path);
    out << "0.25\n0.7500000000000001\n";
  }
  const TriMesh mesh = two_triangle_square();
  InitSpec s;
  s.kind = InitKind::FromFile;
  s.file = path.string();
  const CellField f = build_field(mesh, s);
  CHECK(f[0] == 0.25);
  CHECK(f[1] == 0.7500000000000001);

  {
    std::ofstream out(path);
    out << "0.25\n0.75\n0.5\n";  // three values, two cells
  }
  CHECK_THROWS_AS(build_field(mesh, s), Error);
  fs::remove(path);
}

TEST_CASE("spec validation errors") {
  InitSpec s;
  s.kind = InitKind::UniformRandomV;  // seed missing
  CHECK_THROWS_AS(s.validate(), Error);

  s = InitSpec{};
  s.kind = InitKind::GaussianC;
  s.width = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);

  s = InitSpec{};
  s.kind = InitKind::AnnularGapV;
  s.r_inner = 0.4;
  s.r_outer = 0.2;
  CHECK_THROWS_AS(s.validate(), Error);

  s = InitSpec{};
  s.kind = InitKind::FromFile;
  CHECK_THROWS_AS(s.validate(), Error);
}
