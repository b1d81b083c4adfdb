#pragma once
// Observation windows around a target and the relative-coordinate transform
// that feeds them to the model.

#include <span>
#include <vector>

#include "sanp/context.hpp"
#include "sanp/raster.hpp"

namespace sanp {

struct Observation {
  MapCoord at;
  float elevation = 0.0f;
  std::size_t index = 0;  // row-major pixel index, used for tie-breaking
};

// Full extents of the axis-aligned window in meters.
struct WindowSpec {
  double width_east = 500.0;
  double width_north = 500.0;

  // Both extents must cover at least two cells.
  void validate(double cell_size) const;
};

// Observed pixels with |east - c.east| <= w_east/2 and |north - c.north| <=
// w_north/2, in row-major order. Includes the center pixel when observed.
std::vector<Observation> extract_window(const DemGrid& grid, MapCoord center,
                                        const WindowSpec& spec);

struct ElevationStats {
  double mean = 0.0;
  double std = 1.0;
  std::size_t count = 0;
};

// Mean and population standard deviation over the observed cells.
ElevationStats elevation_stats(const DemGrid& grid);

struct RelativeContext {
  ContextSet context;
  Normalization norm;
};

// Coordinates become ((e - e*) / (w_east/2), (n - n*) / (w_north/2)); elevations
// become (y - mean of the given points) / stats.std.
RelativeContext to_relative(std::span<const Observation> points,
                            MapCoord target, const WindowSpec& spec,
                            const ElevationStats& stats);

}  // namespace sanp
