#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hapto/core.hpp"
#include "hapto/mesh.hpp"

namespace hapto {

enum class InitKind { GaussianC, UniformRandomV, Constant, AnnularGapV, FromFile };

std::string to_string(InitKind k);
InitKind init_kind_from_string(const std::string& s);

/// Recipe for one initial cell field.
struct InitSpec {
  InitKind kind = InitKind::Constant;
  Vec2 center{0.5, 0.5};                // GaussianC / AnnularGapV
  double width = 0.08;                  // GaussianC standard deviation
  double value = 0.0;                   // Constant level / AnnularGapV outside
  std::optional<std::uint64_t> seed;    // UniformRandomV, mandatory there
  double r_inner = 0.0, r_outer = 0.0;  // AnnularGapV radii, r_inner < r_outer
  std::string file;                     // FromFile source path
  std::string column;                   // snapshot-CSV column; empty = plain list

  void validate() const;  // throws Error naming the missing/invalid field
};

/// Evaluates the recipe at the cell centroids. UniformRandomV draws one
/// value per cell in mesh order from the pinned generator, so identical
/// seeds give identical fields. AnnularGapV is exactly zero inside the
/// annulus. FromFile rejects files whose value count mismatches the mesh.
CellField build_field(const TriMesh& mesh, const InitSpec& spec);

/// Pinned uniform draw on the open interval (0,1): the top 52 bits of a
/// raw 64-bit word, offset by half a unit, scaled by 2^-52. Raw words come
/// from std::mt19937_64, which is fully specified, so fields reproduce
/// across platforms and languages.
double uniform_open01(std::uint64_t raw);

}  // namespace hapto
