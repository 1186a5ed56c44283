#pragma once

#include <vector>

namespace hmu {

struct GridMeta {
  int radial_depth = 0;     // J levels of 1 - 2^{-j/4} (0 when not radial)
  int angular_samples = 0;  // circle sample count K
  int a_grid = 0;           // Mobius base-point count (0 when unused)
};

// seminorm value plus the grid it was computed on and a refinement indicator
struct NormEstimate {
  double value = 0.0;
  GridMeta grid;
  double error_indicator = 0.0;      // relative change, two finest levels
  std::vector<double> level_values;  // value at each refinement level
  bool low_accuracy = false;         // set for p < 1 circle integrals
};

}  // namespace hmu
