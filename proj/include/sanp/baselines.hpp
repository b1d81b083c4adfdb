#pragma once
// Classical gap-filling baselines evaluated at map coordinates.
//
// linear: bilinear blend of a 2x2 stencil, cubic: separable convolution with
// the a = -0.5 cubic kernel on a 4x4 stencil. Stencil nodes start at spacing
// 1 cell; when a node carrying nonzero weight is void the spacing grows
// (2, 3, ...) so the stencil straddles the gap. Both stay exact on planes.
// If no stencil fits, cubic falls back to linear and linear to nearest; the
// method actually used is reported per target.

#include <span>
#include <string_view>
#include <vector>

#include "sanp/raster.hpp"

namespace sanp {

enum class InterpMethod { Nearest, Linear, Cubic };

InterpMethod parse_interp_method(std::string_view name);
const char* interp_method_name(InterpMethod m);

struct Interpolated {
  std::vector<double> values;
  std::vector<InterpMethod> used;  // differs from the request on fallback

  std::size_t fallback_count(InterpMethod requested) const;
};

// Largest stencil spacing tried before falling back.
constexpr std::size_t kMaxStencilSpacing = 32;

// Value of the Euclidean-nearest observed pixel; ties go to the lower
// row-major index. Throws DataError on an all-void grid.
Interpolated interp_nearest(const DemGrid& grid, std::span<const MapCoord> targets);
Interpolated interp_linear(const DemGrid& grid, std::span<const MapCoord> targets);
Interpolated interp_cubic(const DemGrid& grid, std::span<const MapCoord> targets);
Interpolated interpolate(InterpMethod method, const DemGrid& grid,
                         std::span<const MapCoord> targets);

// Cubic convolution kernel, a = -0.5.
double cubic_kernel(double x);

namespace reference {
// Serial form of interpolate().
Interpolated interpolate(InterpMethod method, const DemGrid& grid,
                         std::span<const MapCoord> targets);
}

}  // namespace sanp
