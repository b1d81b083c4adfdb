#pragma once

#include <cstdint>
#include <vector>

#include "sanp/raster.hpp"

namespace sanp {

struct SplitSpec {
  std::uint64_t seed = 0;
  std::size_t n_valid = 0;
  std::size_t n_test = 0;
};

struct Splits {
  std::vector<std::uint8_t> trainable;  // per pixel: observed and not held out
  std::vector<std::size_t> valid;       // sorted pixel indices
  std::vector<std::size_t> test;        // sorted pixel indices
};

// Draws validation and test pixels uniformly without replacement from the
// observed pixels. Deterministic in spec.seed.
Splits make_splits(const DemGrid& grid, const SplitSpec& spec);

// Copy of grid with every held-out pixel marked void, so held-out pixels never
// serve as context.
DemGrid mask_heldout(const DemGrid& grid, const Splits& splits);

}  // namespace sanp
