#include "hapto/initial.hpp"

#include <cmath>
#include <random>

#include "hapto/snapshot_io.hpp"

namespace hapto {

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::GaussianC: return "gaussian";
    case InitKind::UniformRandomV: return "uniform_random";
    case InitKind::Constant: return "constant";
    case InitKind::AnnularGapV: return "annular_gap";
    case InitKind::FromFile: return "from_file";
  }
  return "?";
}

InitKind init_kind_from_string(const std::string& s) {
  if (s == "gaussian") return InitKind::GaussianC;
  if (s == "uniform_random") return InitKind::UniformRandomV;
  if (s == "constant") return InitKind::Constant;
  if (s == "annular_gap") return InitKind::AnnularGapV;
  if (s == "from_file") return InitKind::FromFile;
  throw Error("unknown initial field kind '" + s + "'");
}

void InitSpec::validate() const {
  switch (kind) {
    case InitKind::GaussianC:
      if (!(width > 0.0)) throw Error("gaussian initial field requires width > 0");
      break;
    case InitKind::UniformRandomV:
      if (!seed) throw Error("uniform_random initial field requires a seed");
      break;
    case InitKind::AnnularGapV:
      if (!(r_inner >= 0.0) || !(r_outer > r_inner))
        throw Error("annular_gap initial field requires 0 <= r_inner < r_outer");
      break;
    case InitKind::FromFile:
      if (file.empty()) throw Error("from_file initial field requires a file path");
      break;
    case InitKind::Constant:
      break;
  }
}

double uniform_open01(std::uint64_t raw) {
  // k + 0.5 is exactly representable for k < 2^52, so the result lies in
  // [2^-53, 1 - 2^-53] with no rounding.
  return (static_cast<double>(raw >> 12) + 0.5) * 0x1p-52;
}

CellField build_field(const TriMesh& mesh, const InitSpec& spec) {
  spec.validate();
  const int n = mesh.n_cells();
  CellField field(n, 0.0);

  switch (spec.kind) {
    case InitKind::GaussianC: {
      const double two_w2 = 2.0 * spec.width * spec.width;
      for (int i = 0; i < n; ++i) {
        const Vec2 d = mesh.cell_centroids[i] - spec.center;
        field[i] = std::exp(-(d.x * d.x + d.y * d.y) / two_w2);
      }
      break;
    }
    case InitKind::UniformRandomV: {
      std::mt19937_64 rng(*spec.seed);
      for (int i = 0; i < n; ++i) field[i] = uniform_open01(rng());
      break;
    }
    case InitKind::Constant: {
      for (int i = 0; i < n; ++i) field[i] = spec.value;
      break;
    }
    case InitKind::AnnularGapV: {
      for (int i = 0; i < n; ++i) {
        const double r = norm(mesh.cell_centroids[i] - spec.center);
        field[i] = (r >= spec.r_inner && r <= spec.r_outer) ? 0.0 : spec.value;
      }
      break;
    }
    case InitKind::FromFile: {
      field = read_field_file(spec.file, n, spec.column);
      break;
    }
  }
  return field;
}

}  // namespace hapto
