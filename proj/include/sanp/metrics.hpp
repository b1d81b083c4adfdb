#pragma once

#include <optional>
#include <span>

#include "sanp/predict.hpp"

namespace sanp {

struct MetricsReport {
  std::optional<double> nll;  // nats per point; absent for point estimates
  double mae = 0.0;           // meters
  double rmse = 0.0;          // meters
  std::size_t n_points = 0;
  double wall_seconds = 0.0;
};

MetricsReport compute_metrics(std::span<const PredictiveGaussian> predictions,
                              std::span<const double> truth);
MetricsReport compute_metrics(std::span<const double> estimates,
                              std::span<const double> truth);

// Predicts N(mean, std^2) everywhere.
MetricsReport constant_gaussian_metrics(double mean, double std,
                                        std::span<const double> truth);

}  // namespace sanp
