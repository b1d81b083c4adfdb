#include "sanp/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "sanp/errors.hpp"
#include "sanp/rng.hpp"

namespace sanp {

DemGrid synth_terrain(const SynthSpec& spec) {
  if (spec.size < 64) throw ContractError("synthetic terrain size must be >= 64");
  if (!(spec.roughness >= 0.0 && spec.roughness <= 1.0))
    throw ContractError("roughness must lie in [0, 1]");

  std::size_t n = 1;
  while (n + 1 < spec.size) n *= 2;
  const std::size_t side = n + 1;
  std::vector<double> h(side * side, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return h[r * side + c]; };

  Rng rng = make_rng(spec.seed, 0x7e77a1);
  double amp = spec.roughness;
  for (std::size_t step = n; step >= 2; step /= 2, amp *= spec.roughness) {
    const std::size_t half = step / 2;
    // diamond
    for (std::size_t r = half; r < side; r += step)
      for (std::size_t c = half; c < side; c += step) {
        const double avg = 0.25 * (at(r - half, c - half) + at(r - half, c + half) +
                                   at(r + half, c - half) + at(r + half, c + half));
        at(r, c) = avg + amp * uniform(rng, -1.0, 1.0);
      }
    // square
    for (std::size_t r = 0; r < side; r += half)
      for (std::size_t c = (r / half) % 2 == 0 ? half : 0; c < side; c += step) {
        double total = 0;
        int count = 0;
        if (r >= half) { total += at(r - half, c); ++count; }
        if (r + half < side) { total += at(r + half, c); ++count; }
        if (c >= half) { total += at(r, c - half); ++count; }
        if (c + half < side) { total += at(r, c + half); ++count; }
        at(r, c) = total / count + amp * uniform(rng, -1.0, 1.0);
      }
  }

  DemGrid g = DemGrid::filled(spec.size, spec.size, spec.cell_size);
  double mean = 0;
  for (std::size_t r = 0; r < spec.size; ++r)
    for (std::size_t c = 0; c < spec.size; ++c) mean += at(r, c);
  mean /= double(spec.size * spec.size);
  double peak = 0;
  for (std::size_t r = 0; r < spec.size; ++r)
    for (std::size_t c = 0; c < spec.size; ++c)
      peak = std::max(peak, std::abs(at(r, c) - mean));
  const double s = peak > 0 ? spec.amplitude / peak : 0.0;
  for (std::size_t r = 0; r < spec.size; ++r)
    for (std::size_t c = 0; c < spec.size; ++c)
      g.elevations[g.index(r, c)] = static_cast<float>((at(r, c) - mean) * s);
  return g;
}

VoidSpec parse_void_spec(std::string_view text) {
  if (text == "none") return {};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ContractError("void spec must be none, rect:F, blob:F or mixed:F");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view num = text.substr(colon + 1);
  VoidSpec v;
  if (kind == "rect") v.shape = VoidShape::Rect;
  else if (kind == "blob") v.shape = VoidShape::Blob;
  else if (kind == "mixed") v.shape = VoidShape::Mixed;
  else throw ContractError("unknown void shape '" + std::string(kind) + "'");
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v.fraction);
  if (ec != std::errc() || ptr != num.data() + num.size() ||
      !(v.fraction >= 0.0 && v.fraction <= 0.9))
    throw ContractError("void fraction must be a number in [0, 0.9]");
  return v;
}

DemGrid punch_voids(const DemGrid& grid, const VoidSpec& spec,
                    std::uint64_t seed) {
  DemGrid out = grid;
  if (spec.shape == VoidShape::None || spec.fraction <= 0) return out;
  const std::size_t total = grid.size();
  const std::size_t target = static_cast<std::size_t>(std::llround(spec.fraction * double(total)));
  std::size_t voids = out.void_count();
  Rng rng = make_rng(seed, 0x701d);
  const std::size_t max_extent = std::max<std::size_t>(4, std::min(grid.nrows, grid.ncols) / 8);

  auto mark = [&](std::size_t i) {
    if (voids < target && !out.nodata[i]) {
      out.nodata[i] = 1;
      ++voids;
    }
  };

  for (std::size_t shape_no = 0; voids < target; ++shape_no) {
    const bool rect = spec.shape == VoidShape::Rect ||
                      (spec.shape == VoidShape::Mixed && shape_no % 2 == 0);
    if (rect) {
      const std::size_t h = 2 + uniform_index(rng, max_extent - 1);
      const std::size_t w = 2 + uniform_index(rng, max_extent - 1);
      const std::size_t r0 = uniform_index(rng, grid.nrows - std::min(h, grid.nrows) + 1);
      const std::size_t c0 = uniform_index(rng, grid.ncols - std::min(w, grid.ncols) + 1);
      for (std::size_t r = r0; r < std::min(grid.nrows, r0 + h); ++r)
        for (std::size_t c = c0; c < std::min(grid.ncols, c0 + w); ++c)
          mark(grid.index(r, c));
    } else {
      // Random walk that wanders away from its seed pixel, carving an
      // irregular blob.
      const std::size_t steps = 4 * max_extent * max_extent / 3 + 1;
      long long r = static_cast<long long>(uniform_index(rng, grid.nrows));
      long long c = static_cast<long long>(uniform_index(rng, grid.ncols));
      for (std::size_t s = 0; s < steps && voids < target; ++s) {
        mark(grid.index(std::size_t(r), std::size_t(c)));
        switch (uniform_index(rng, 4)) {
          case 0: r = std::min<long long>(r + 1, grid.nrows - 1); break;
          case 1: r = std::max<long long>(r - 1, 0); break;
          case 2: c = std::min<long long>(c + 1, grid.ncols - 1); break;
          default: c = std::max<long long>(c - 1, 0); break;
        }
      }
    }
  }
  return out;
}

}  // namespace sanp
