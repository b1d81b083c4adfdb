#include "sanp/predict.hpp"

#include <bit>
#include <cmath>
#include <exception>

namespace sanp {

namespace {

// The draw for a target depends only on its location, so results do not
// depend on target order or thread schedule.
Rng target_rng(std::uint64_t seed, MapCoord target) {
  return make_rng(derive_seed(seed, 0x1dfe),
                  std::bit_cast<std::uint64_t>(target.east),
                  std::bit_cast<std::uint64_t>(target.north));
}

}  // namespace

std::vector<Observation> inference_context(const DemGrid& grid, MapCoord target,
                                           const InferenceSetup& setup) {
  const auto win = extract_window(grid, target, setup.window);
  std::size_t candidates = 0;
  for (const auto& o : win)
    if (std::hypot(o.at.east - target.east, o.at.north - target.north) > 1e-9)
      ++candidates;
  if (candidates == 0) return {};
  SamplerConfig cfg = setup.sampler;
  cfg.k = std::min(cfg.k, candidates);
  Rng rng = target_rng(cfg.seed, target);
  return sample_context(win, target, cfg, rng);
}

std::optional<PredictiveGaussian> predict_one(const ModelParams<float>& params,
                                              const DemGrid& grid,
                                              MapCoord target,
                                              const InferenceSetup& setup) {
  const auto picked = inference_context(grid, target, setup);
  if (picked.empty()) return std::nullopt;
  const RelativeContext rc =
      to_relative(picked, target, setup.window, setup.stats);
  const StandardGaussian g = predict_standardized(params, rc.context);
  return PredictiveGaussian{rc.norm.inverse(g.mu), g.sigma * rc.norm.scale};
}

std::vector<std::optional<PredictiveGaussian>> predict(
    const ModelParams<float>& params, const DemGrid& grid,
    std::span<const MapCoord> targets, const InferenceSetup& setup) {
  setup.sampler.validate();
  std::vector<std::optional<PredictiveGaussian>> out(targets.size());
  std::exception_ptr failure;
  const long long n = static_cast<long long>(targets.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < n; ++i) {
    try {
      out[std::size_t(i)] = predict_one(params, grid, targets[std::size_t(i)], setup);
    } catch (...) {
#pragma omp critical(sanp_predict_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace reference {

std::vector<std::optional<PredictiveGaussian>> predict(
    const ModelParams<float>& params, const DemGrid& grid,
    std::span<const MapCoord> targets, const InferenceSetup& setup) {
  setup.sampler.validate();
  std::vector<std::optional<PredictiveGaussian>> out;
  out.reserve(targets.size());
  for (const MapCoord& t : targets)
    out.push_back(predict_one(params, grid, t, setup));
  return out;
}

}  // namespace reference

}  // namespace sanp
