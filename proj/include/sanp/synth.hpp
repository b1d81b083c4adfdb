#pragma once
// Desk-scale stand-in terrain: diamond-square fractal surfaces and void masks.

#include <cstdint>
#include <string_view>

#include "sanp/raster.hpp"

namespace sanp {

struct SynthSpec {
  std::size_t size = 256;
  std::uint64_t seed = 0;
  // Per-octave amplitude persistence in [0, 1]. 0 gives a plane, ~0.5 a
  // smooth surface, values toward 1 increasingly rough terrain.
  double roughness = 0.6;
  double cell_size = 5.0;
  double amplitude = 20.0;  // max |z - mean| after scaling, meters
};

DemGrid synth_terrain(const SynthSpec& spec);

enum class VoidShape { None, Rect, Blob, Mixed };

struct VoidSpec {
  VoidShape shape = VoidShape::None;
  double fraction = 0.0;  // of all pixels
};

// "none", "rect:F", "blob:F" or "mixed:F" with F in [0, 0.9].
VoidSpec parse_void_spec(std::string_view text);

// Marks rectangles and/or random-walk blobs void until exactly
// round(fraction * size) pixels are void.
DemGrid punch_voids(const DemGrid& grid, const VoidSpec& spec,
                    std::uint64_t seed);

}  // namespace sanp
