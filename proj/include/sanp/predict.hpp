#pragma once
// Per-target inference over a raster. Targets are independent, so the
// parallel and serial paths produce identical results.

#include <optional>
#include <span>
#include <vector>

#include "sanp/model.hpp"
#include "sanp/sampling.hpp"
#include "sanp/window.hpp"

namespace sanp {

// Elevation distribution in meters.
struct PredictiveGaussian {
  double mu = 0.0;
  double sigma = 1.0;
};

struct InferenceSetup {
  WindowSpec window;
  SamplerConfig sampler;  // alpha as trained; seed fixes the context draw
  ElevationStats stats;   // std from training, used to denormalize
};

// Context for one target: sampled from the observed window points of `grid`
// (target excluded), using every candidate when fewer than K exist. Empty
// when the window holds no candidate.
std::vector<Observation> inference_context(const DemGrid& grid, MapCoord target,
                                           const InferenceSetup& setup);

// nullopt marks an unpredictable target (no observed point in its window).
std::optional<PredictiveGaussian> predict_one(const ModelParams<float>& params,
                                              const DemGrid& grid,
                                              MapCoord target,
                                              const InferenceSetup& setup);

std::vector<std::optional<PredictiveGaussian>> predict(
    const ModelParams<float>& params, const DemGrid& grid,
    std::span<const MapCoord> targets, const InferenceSetup& setup);

namespace reference {
std::vector<std::optional<PredictiveGaussian>> predict(
    const ModelParams<float>& params, const DemGrid& grid,
    std::span<const MapCoord> targets, const InferenceSetup& setup);
}

}  // namespace sanp
