#include "sanp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sanp/errors.hpp"

namespace sanp {

void SamplerConfig::validate() const {
  if (k < 1) throw ContractError("context size K must be >= 1");
  if (!(alpha >= 0)) throw ContractError("sampling temperature must be >= 0");
}

std::vector<Observation> sample_context(std::span<const Observation> window,
                                        MapCoord target,
                                        const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  struct Keyed {
    double key;
    std::size_t pos;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(window.size());
  const bool nearest = cfg.alpha == 0.0;
  const bool uniform = std::isinf(cfg.alpha);
  for (std::size_t p = 0; p < window.size(); ++p) {
    const double d = std::hypot(window[p].at.east - target.east,
                                window[p].at.north - target.north);
    if (d <= 1e-9) continue;  // the target itself has zero weight
    double key;
    if (nearest) {
      key = d;
    } else {
      // Exponential race: the k smallest E_i / w_i form a weighted sample
      // without replacement. Kept in log space so tiny weights cannot
      // underflow.
      key = std::log(-std::log(uniform01(rng)));
      if (!uniform) key += d / cfg.alpha;
    }
    keyed.push_back({key, p});
  }
  if (keyed.size() < cfg.k)
    throw InsufficientContextError(
        "window holds " + std::to_string(keyed.size()) +
        " candidate points, fewer than K = " + std::to_string(cfg.k));

  auto less = [&](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key < b.key;
    return window[a.pos].index < window[b.pos].index;
  };
  std::nth_element(keyed.begin(), keyed.begin() + std::ptrdiff_t(cfg.k - 1),
                   keyed.end(), less);
  keyed.resize(cfg.k);
  std::sort(keyed.begin(), keyed.end(),
            [](const Keyed& a, const Keyed& b) { return a.pos < b.pos; });
  std::vector<Observation> out;
  out.reserve(cfg.k);
  for (const auto& kv : keyed) out.push_back(window[kv.pos]);
  return out;
}

AugmentParams AugmentParams::draw(Rng& rng) {
  AugmentParams p;
  p.theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  p.scale = uniform(rng, 0.5, 1.5);
  return p;
}

ContextSet augment(const ContextSet& ctx, const AugmentParams& params) {
  ContextSet out = ctx;
  if (params.theta != 0.0) {
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    for (auto& xy : out.xy) {
      const double x = xy[0], y = xy[1];
      xy[0] = static_cast<float>(x * c - y * s);
      xy[1] = static_cast<float>(x * s + y * c);
    }
  }
  if (params.scale != 1.0)
    for (auto& y : out.y) y = static_cast<float>(y * params.scale);
  return out;
}

std::vector<Triplet> sample_training_batch(const Dataset& data,
                                           const WindowSpec& window,
                                           const SamplerConfig& cfg,
                                           std::size_t batch,
                                           std::uint64_t iteration,
                                           bool with_augmentation) {
  cfg.validate();
  if (batch < 1) throw ContractError("batch size must be >= 1");
  if (data.train_pixels.size() < cfg.k + 1)
    throw DataError("unusable dataset: " +
                    std::to_string(data.train_pixels.size()) +
                    " training pixels, need at least K + 1 = " +
                    std::to_string(cfg.k + 1));
  constexpr std::size_t kMaxRedraws = 1000;

  std::vector<Triplet> out(batch);
  for (std::size_t item = 0; item < batch; ++item) {
    Rng rng = make_rng(cfg.seed, iteration, item);
    bool done = false;
    for (std::size_t attempt = 0; attempt < kMaxRedraws && !done; ++attempt) {
      const std::size_t pixel =
          data.train_pixels[uniform_index(rng, data.train_pixels.size())];
      const MapCoord at = data.train_grid.center(pixel);
      const auto win = extract_window(data.train_grid, at, window);
      if (win.size() < cfg.k + 1) continue;  // +1: the target itself
      const auto picked = sample_context(win, at, cfg, rng);
      RelativeContext rc = to_relative(picked, at, window, data.stats);
      Triplet& t = out[item];
      t.pixel = pixel;
      t.norm = rc.norm;
      t.target =
          static_cast<float>(rc.norm.forward(data.train_grid.elevations[pixel]));
      if (with_augmentation) {
        const AugmentParams ap = AugmentParams::draw(rng);
        t.context = augment(rc.context, ap);
        t.target = static_cast<float>(t.target * ap.scale);
      } else {
        t.context = std::move(rc.context);
      }
      done = true;
    }
    if (!done)
      throw DataError("unusable dataset: no target with K context points found");
  }
  return out;
}

}  // namespace sanp
