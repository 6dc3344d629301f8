#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hapto {

/// Per-cell scalar field: one value per mesh cell, in mesh cell order.
using CellField = std::vector<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }

/// Runtime failure in mesh construction, configuration, or time stepping.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// State values may overshoot their admissible range by at most this much
/// before being snapped back; larger violations are hard errors.
inline constexpr double kRangeTol = 1e-12;

/// Centroid-offset components below kGradGuardScale * domain diameter are
/// treated as zero in the per-component edge difference quotients.
inline constexpr double kGradGuardScale = 1e-12;

}  // namespace hapto
