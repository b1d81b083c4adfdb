#include "sanp/baselines.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sanp/errors.hpp"

namespace sanp {

InterpMethod parse_interp_method(std::string_view name) {
  if (name == "nearest") return InterpMethod::Nearest;
  if (name == "linear") return InterpMethod::Linear;
  if (name == "cubic") return InterpMethod::Cubic;
  throw ContractError("unknown interpolation method '" + std::string(name) +
                      "' (expected nearest, linear or cubic)");
}

const char* interp_method_name(InterpMethod m) {
  switch (m) {
    case InterpMethod::Nearest: return "nearest";
    case InterpMethod::Linear: return "linear";
    case InterpMethod::Cubic: return "cubic";
  }
  return "?";
}

std::size_t Interpolated::fallback_count(InterpMethod requested) const {
  std::size_t n = 0;
  for (auto m : used) n += (m != requested);
  return n;
}

double cubic_kernel(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1) return ((a + 2) * x - (a + 3)) * x * x + 1;
  if (x < 2) return ((a * x - 5 * a) * x + 8 * a) * x - 4 * a;
  return 0.0;
}

namespace {

struct Position {
  double row, col;
};

Position position_of(const DemGrid& grid, MapCoord p) {
  if (!grid.contains(p))
    throw BoundsError("query (" + std::to_string(p.east) + ", " +
                      std::to_string(p.north) + ") lies outside the grid");
  return {grid.row_position(p.north), grid.col_position(p.east)};
}

double nearest_at(const DemGrid& grid, Position pos) {
  const long long nr = static_cast<long long>(grid.nrows);
  const long long nc = static_cast<long long>(grid.ncols);
  const long long r0 = std::clamp<long long>(std::llround(pos.row), 0, nr - 1);
  const long long c0 = std::clamp<long long>(std::llround(pos.col), 0, nc - 1);
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  bool found = false;
  auto visit = [&](long long r, long long c) {
    if (r < 0 || c < 0 || r >= nr || c >= nc) return;
    const std::size_t i = grid.index(std::size_t(r), std::size_t(c));
    if (!grid.observed(i)) return;
    const double dr = double(r) - pos.row, dc = double(c) - pos.col;
    const double d2 = dr * dr + dc * dc;
    if (!found || d2 < best_d2 || (d2 == best_d2 && i < best)) {
      best_d2 = d2;
      best = i;
      found = true;
    }
  };
  const long long max_ring = std::max(nr, nc);
  for (long long ring = 0; ring <= max_ring; ++ring) {
    if (ring == 0) {
      visit(r0, c0);
    } else {
      for (long long c = c0 - ring; c <= c0 + ring; ++c) {
        visit(r0 - ring, c);
        visit(r0 + ring, c);
      }
      for (long long r = r0 - ring + 1; r <= r0 + ring - 1; ++r) {
        visit(r, c0 - ring);
        visit(r, c0 + ring);
      }
    }
    // Anything on a further ring is at least ring + 0.5 cells away.
    if (found) {
      const double bound = double(ring) + 0.5;
      if (best_d2 < bound * bound) break;
    }
  }
  if (!found) throw DataError("nearest interpolation on a grid with no observed pixels");
  return grid.elevations[best];
}

template <std::size_t N>
struct AxisStencil {
  std::array<long long, N> node;
  std::array<double, N> weight;
};

// 2-point linear stencil with spacing h along an axis of n pixels.
std::optional<AxisStencil<2>> linear_axis(double t, long long n, long long h) {
  if (h > n - 1) return std::nullopt;
  long long base = h == 1 ? static_cast<long long>(std::floor(t))
                          : std::llround(t - 0.5 * double(h));
  base = std::clamp<long long>(base, 0, n - 1 - h);
  const double f = (t - double(base)) / double(h);
  if (f < 0 || f > 1) return std::nullopt;
  return AxisStencil<2>{{base, base + h}, {1 - f, f}};
}

// 4-point cubic stencil with spacing h; the query must lie between the two
// middle nodes.
std::optional<AxisStencil<4>> cubic_axis(double t, long long n, long long h) {
  if (3 * h > n - 1) return std::nullopt;
  long long base = h == 1 ? static_cast<long long>(std::floor(t))
                          : std::llround(t - 0.5 * double(h));
  base = std::clamp<long long>(base, h, n - 1 - 2 * h);
  const double f = (t - double(base)) / double(h);
  if (f < 0 || f > 1) return std::nullopt;
  return AxisStencil<4>{{base - h, base, base + h, base + 2 * h},
                        {cubic_kernel(f + 1), cubic_kernel(f),
                         cubic_kernel(1 - f), cubic_kernel(2 - f)}};
}

template <std::size_t N, class AxisFn>
std::optional<double> stencil_at(const DemGrid& grid, Position pos,
                                 AxisFn axis) {
  const long long nr = static_cast<long long>(grid.nrows);
  const long long nc = static_cast<long long>(grid.ncols);
  for (long long h = 1; h <= static_cast<long long>(kMaxStencilSpacing); ++h) {
    const auto rs = axis(pos.row, nr, h);
    const auto cs = axis(pos.col, nc, h);
    if (!rs || !cs) continue;
    bool ok = true;
    double value = 0;
    for (std::size_t i = 0; i < N && ok; ++i) {
      if (rs->weight[i] == 0) continue;
      for (std::size_t j = 0; j < N; ++j) {
        if (cs->weight[j] == 0) continue;
        const std::size_t idx =
            grid.index(std::size_t(rs->node[i]), std::size_t(cs->node[j]));
        if (!grid.observed(idx)) {
          ok = false;
          break;
        }
        value += rs->weight[i] * cs->weight[j] * double(grid.elevations[idx]);
      }
    }
    if (ok) return value;
  }
  return std::nullopt;
}

std::pair<double, InterpMethod> interpolate_one(InterpMethod method,
                                                const DemGrid& grid,
                                                MapCoord p) {
  const Position pos = position_of(grid, p);
  if (method == InterpMethod::Cubic) {
    if (auto v = stencil_at<4>(grid, pos, cubic_axis))
      return {*v, InterpMethod::Cubic};
    method = InterpMethod::Linear;
  }
  if (method == InterpMethod::Linear) {
    if (auto v = stencil_at<2>(grid, pos, linear_axis))
      return {*v, InterpMethod::Linear};
  }
  return {nearest_at(grid, pos), InterpMethod::Nearest};
}

void check_grid(const DemGrid& grid) {
  if (grid.observed_count() == 0)
    throw DataError("interpolation on a grid with no observed pixels");
}

}  // namespace

Interpolated interpolate(InterpMethod method, const DemGrid& grid,
                         std::span<const MapCoord> targets) {
  check_grid(grid);
  for (const auto& p : targets) position_of(grid, p);
  Interpolated out;
  out.values.resize(targets.size());
  out.used.resize(targets.size());
  const long long n = static_cast<long long>(targets.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const auto [v, m] = interpolate_one(method, grid, targets[std::size_t(i)]);
    out.values[std::size_t(i)] = v;
    out.used[std::size_t(i)] = m;
  }
  return out;
}

Interpolated interp_nearest(const DemGrid& grid, std::span<const MapCoord> targets) {
  return interpolate(InterpMethod::Nearest, grid, targets);
}
Interpolated interp_linear(const DemGrid& grid, std::span<const MapCoord> targets) {
  return interpolate(InterpMethod::Linear, grid, targets);
}
Interpolated interp_cubic(const DemGrid& grid, std::span<const MapCoord> targets) {
  return interpolate(InterpMethod::Cubic, grid, targets);
}

namespace reference {

Interpolated interpolate(InterpMethod method, const DemGrid& grid,
                         std::span<const MapCoord> targets) {
  check_grid(grid);
  Interpolated out;
  for (const auto& p : targets) {
    const auto [v, m] = interpolate_one(method, grid, p);
    out.values.push_back(v);
    out.used.push_back(m);
  }
  return out;
}

}  // namespace reference

}  // namespace sanp
