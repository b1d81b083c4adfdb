#pragma once

#include "sanp/splits.hpp"
#include "sanp/window.hpp"

namespace sanp {

// A raster prepared for self-supervised training: held-out pixels are split
// off and masked, and the elevation scale is fixed from the training pixels.
struct Dataset {
  DemGrid truth;                         // as loaded
  Splits splits;
  DemGrid train_grid;                    // truth with held-out pixels void
  std::vector<std::size_t> train_pixels; // observed, not held out
  ElevationStats stats;                  // over train_grid; std floored at 1 m
                                         // when the terrain is exactly flat

  static Dataset build(DemGrid grid, const SplitSpec& split);
};

}  // namespace sanp
