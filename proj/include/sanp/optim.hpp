#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sanp/params.hpp"

namespace sanp {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <class T>
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor<T>> first_moment;
  std::vector<Tensor<T>> second_moment;

  static AdamState init(const ParamSet<T>& params, AdamConfig cfg = {}) {
    AdamState s;
    s.config = cfg;
    for (std::size_t i = 0; i < params.size(); ++i) {
      s.first_moment.emplace_back(params[i].shape);
      s.second_moment.emplace_back(params[i].shape);
    }
    return s;
  }

  bool operator==(const AdamState& o) const {
    return step == o.step && first_moment == o.first_moment &&
           second_moment == o.second_moment;
  }
};

// One bias-corrected Adam update, in place.
template <class T>
void adam_step(ParamSet<T>& params, const ParamSet<T>& grads,
               AdamState<T>& state) {
  if (grads.size() != params.size() ||
      state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size())
    throw DimensionError("adam_step: parameter/gradient/moment count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].shape != params[i].shape ||
        state.first_moment[i].shape != params[i].shape ||
        state.second_moment[i].shape != params[i].shape)
      throw DimensionError("adam_step: shape mismatch for '" + params.name(i) +
                           "': " + shape_string(params[i].shape) + " vs " +
                           shape_string(grads[i].shape));
  }
  const AdamConfig& c = state.config;
  state.step += 1;
  const double t = double(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  const T b1 = T(c.beta1), b2 = T(c.beta2);
  const T step_size = T(c.learning_rate / bc1);
  const T inv_sqrt_bc2 = T(1.0 / std::sqrt(bc2));
  const T eps = T(c.epsilon);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i].values;
    const auto& g = grads[i].values;
    auto& m = state.first_moment[i].values;
    auto& v = state.second_moment[i].values;
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = b1 * m[j] + (T(1) - b1) * g[j];
      v[j] = b2 * v[j] + (T(1) - b2) * g[j] * g[j];
      p[j] -= step_size * m[j] / (std::sqrt(v[j]) * inv_sqrt_bc2 + eps);
    }
  }
}

// Scales grads so their global L2 norm is at most max_norm. Returns the norm
// before clipping. max_norm <= 0 disables clipping.
template <class T>
double clip_global_norm(ParamSet<T>& grads, double max_norm) {
  double sq = 0;
  for (std::size_t i = 0; i < grads.size(); ++i)
    for (T g : grads[i].values) sq += double(g) * double(g);
  const double norm = std::sqrt(sq);
  if (max_norm > 0 && norm > max_norm) {
    const T f = T(max_norm / norm);
    for (std::size_t i = 0; i < grads.size(); ++i)
      for (T& g : grads[i].values) g *= f;
  }
  return norm;
}

}  // namespace sanp
