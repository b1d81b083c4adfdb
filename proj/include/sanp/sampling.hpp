#pragma once
// Sparse context selection and geometric augmentation.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sanp/context.hpp"
#include "sanp/dataset.hpp"
#include "sanp/rng.hpp"
#include "sanp/window.hpp"

namespace sanp {

struct SamplerConfig {
  std::size_t k = 100;
  // Sampling temperature in meters. 0 selects the k nearest points, infinity
  // samples uniformly.
  double alpha = 400.0;
  std::uint64_t seed = 0;

  void validate() const;
};

constexpr double kInfiniteAlpha = std::numeric_limits<double>::infinity();

// Draws cfg.k distinct window points, excluding any point located at the
// target, with probability weights exp(-distance / alpha) (sequential draws
// without replacement). Ties at alpha = 0 go to the lower pixel index. The
// result is ordered by window position.
std::vector<Observation> sample_context(std::span<const Observation> window,
                                        MapCoord target,
                                        const SamplerConfig& cfg, Rng& rng);

struct AugmentParams {
  double theta = 0.0;  // radians, [0, 2 pi)
  double scale = 1.0;  // [0.5, 1.5]

  static AugmentParams draw(Rng& rng);
};

// Rotates every relative coordinate by theta about the target (origin) and
// multiplies every elevation by scale.
ContextSet augment(const ContextSet& ctx, const AugmentParams& params);

struct Triplet {
  ContextSet context;
  float target = 0.0f;  // standardized elevation at the target
  Normalization norm;
  std::size_t pixel = 0;
};

// B training triplets for one iteration. Item i draws from its own stream
// derived from (cfg.seed, iteration, i), so batches are reproducible and may
// be produced in parallel.
std::vector<Triplet> sample_training_batch(const Dataset& data,
                                           const WindowSpec& window,
                                           const SamplerConfig& cfg,
                                           std::size_t batch,
                                           std::uint64_t iteration,
                                           bool with_augmentation);

}  // namespace sanp
