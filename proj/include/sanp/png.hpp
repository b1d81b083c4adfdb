#pragma once

#include <filesystem>

#include "sanp/raster.hpp"

namespace sanp {

// 8-bit greyscale image of a raster. Values map linearly from [min, max] to
// grey levels 1..255; level 0 marks no-data. A sidecar "<path>.txt" records
// the scale. Returns the (min, max) used.
std::pair<double, double> write_png_greyscale(const std::filesystem::path& path,
                                              const DemGrid& grid);

}  // namespace sanp
