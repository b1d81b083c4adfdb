#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace sanp {

// K (relative coordinate, standardized elevation) pairs conditioning one
// prediction. Coordinates are relative to the target, which sits at the origin.
struct ContextSet {
  std::vector<std::array<float, 2>> xy;
  std::vector<float> y;

  std::size_t size() const { return y.size(); }
  bool empty() const { return y.empty(); }
  void push_back(float x0, float x1, float elevation) {
    xy.push_back({x0, x1});
    y.push_back(elevation);
  }
};

// Affine elevation standardization z = (y - offset) / scale.
struct Normalization {
  double offset = 0.0;
  double scale = 1.0;

  double forward(double y) const { return (y - offset) / scale; }
  double inverse(double z) const { return z * scale + offset; }
};

}  // namespace sanp
