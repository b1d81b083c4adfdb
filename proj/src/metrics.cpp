#include "sanp/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sanp/errors.hpp"

namespace sanp {

namespace {

void check_lengths(std::size_t predictions, std::size_t truth) {
  if (predictions != truth)
    throw DimensionError("compute_metrics: " + std::to_string(predictions) +
                         " predictions for " + std::to_string(truth) +
                         " truth values");
  if (truth == 0) throw ContractError("compute_metrics: no points");
}

MetricsReport error_metrics(std::span<const double> mu,
                            std::span<const double> truth) {
  double abs_sum = 0, sq_sum = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double e = mu[i] - truth[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  MetricsReport r;
  r.n_points = mu.size();
  r.mae = abs_sum / double(r.n_points);
  r.rmse = std::sqrt(sq_sum / double(r.n_points));
  // Rounding can put rmse a hair under mae when every error is equal.
  if (r.rmse < r.mae) r.rmse = r.mae;
  return r;
}

}  // namespace

MetricsReport compute_metrics(std::span<const PredictiveGaussian> predictions,
                              std::span<const double> truth) {
  check_lengths(predictions.size(), truth.size());
  std::vector<double> mu(predictions.size());
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double nll = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    if (!(p.sigma > 0))
      throw DomainError("compute_metrics: predictive sigma must be > 0");
    mu[i] = p.mu;
    const double z = (truth[i] - p.mu) / p.sigma;
    nll += std::log(p.sigma) + half_log_2pi + 0.5 * z * z;
  }
  MetricsReport r = error_metrics(mu, truth);
  r.nll = nll / double(predictions.size());
  return r;
}

MetricsReport compute_metrics(std::span<const double> estimates,
                              std::span<const double> truth) {
  check_lengths(estimates.size(), truth.size());
  return error_metrics(estimates, truth);
}

MetricsReport constant_gaussian_metrics(double mean, double std,
                                        std::span<const double> truth) {
  std::vector<PredictiveGaussian> p(truth.size(), PredictiveGaussian{mean, std});
  return compute_metrics(p, truth);
}

}  // namespace sanp
