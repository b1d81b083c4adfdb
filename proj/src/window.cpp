#include "sanp/window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sanp/errors.hpp"

namespace sanp {

void WindowSpec::validate(double cell_size) const {
  if (!(width_east >= 2 * cell_size) || !(width_north >= 2 * cell_size))
    throw ContractError("window extents (" + std::to_string(width_east) +
                        " m x " + std::to_string(width_north) +
                        " m) must each span at least two cells of " +
                        std::to_string(cell_size) + " m");
}

std::vector<Observation> extract_window(const DemGrid& grid, MapCoord center,
                                        const WindowSpec& spec) {
  if (!grid.contains(center))
    throw BoundsError("window center (" + std::to_string(center.east) + ", " +
                      std::to_string(center.north) + ") lies outside the grid");
  const double he = 0.5 * spec.width_east;
  const double hn = 0.5 * spec.width_north;
  const double tol = 1e-9 * grid.cell_size;

  const double c_lo = grid.col_position(center.east - he);
  const double c_hi = grid.col_position(center.east + he);
  const double r_lo = grid.row_position(center.north + hn);
  const double r_hi = grid.row_position(center.north - hn);
  const auto clamp_index = [](double v, std::size_t n) -> long long {
    return std::clamp<long long>(static_cast<long long>(v), 0,
                                 static_cast<long long>(n) - 1);
  };
  const long long c0 = clamp_index(std::floor(c_lo), grid.ncols);
  const long long c1 = clamp_index(std::ceil(c_hi), grid.ncols);
  const long long r0 = clamp_index(std::floor(r_lo), grid.nrows);
  const long long r1 = clamp_index(std::ceil(r_hi), grid.nrows);

  std::vector<Observation> out;
  out.reserve(std::size_t(r1 - r0 + 1) * std::size_t(c1 - c0 + 1));
  for (long long r = r0; r <= r1; ++r) {
    for (long long c = c0; c <= c1; ++c) {
      const std::size_t i = grid.index(std::size_t(r), std::size_t(c));
      if (!grid.observed(i)) continue;
      const MapCoord p = grid.center(std::size_t(r), std::size_t(c));
      if (std::abs(p.east - center.east) > he + tol) continue;
      if (std::abs(p.north - center.north) > hn + tol) continue;
      out.push_back({p, grid.elevations[i], i});
    }
  }
  return out;
}

ElevationStats elevation_stats(const DemGrid& grid) {
  ElevationStats s;
  double sum = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.observed(i)) continue;
    sum += grid.elevations[i];
    ++s.count;
  }
  if (s.count == 0) throw DataError("no observed elevations");
  s.mean = sum / double(s.count);
  double ss = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.observed(i)) continue;
    const double d = grid.elevations[i] - s.mean;
    ss += d * d;
  }
  s.std = std::sqrt(ss / double(s.count));
  return s;
}

RelativeContext to_relative(std::span<const Observation> points,
                            MapCoord target, const WindowSpec& spec,
                            const ElevationStats& stats) {
  if (!(stats.std > 0))
    throw DataError("degenerate data: global elevation std is zero");
  if (points.empty()) throw ContractError("to_relative: no context points");
  double mean = 0;
  for (const auto& p : points) mean += p.elevation;
  mean /= double(points.size());

  RelativeContext rc;
  rc.norm = Normalization{mean, stats.std};
  const double sx = 0.5 * spec.width_east;
  const double sy = 0.5 * spec.width_north;
  rc.context.xy.reserve(points.size());
  rc.context.y.reserve(points.size());
  for (const auto& p : points)
    rc.context.push_back(static_cast<float>((p.at.east - target.east) / sx),
                         static_cast<float>((p.at.north - target.north) / sy),
                         static_cast<float>(rc.norm.forward(p.elevation)));
  return rc;
}

}  // namespace sanp
