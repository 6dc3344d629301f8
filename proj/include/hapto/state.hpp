#pragma once

#include "hapto/core.hpp"

namespace hapto {

/// Time plus the two piecewise-constant cell fields advanced by the solver.
struct SimState {
  double t = 0.0;
  CellField c;  // tumor cell density, >= 0
  CellField v;  // tissue fiber density, in [0, 1]
};

}  // namespace hapto
