#pragma once
// One-factor sweeps over K, alpha or D, and inference-time measurement.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sanp/train.hpp"

namespace sanp {

enum class AblationAxis { K, Alpha, Dim };

AblationAxis parse_ablation_axis(std::string_view name);
const char* ablation_axis_name(AblationAxis axis);

// Axis values in user units: K and D as counts, alpha in km ("inf" allowed).
std::vector<double> default_ablation_values(AblationAxis axis);
std::vector<double> parse_ablation_values(AblationAxis axis, std::string_view list);
std::string format_axis_value(AblationAxis axis, double value);

struct AblationRow {
  double value = 0.0;
  std::optional<MetricsReport> metrics;  // empty when the run failed
  double seconds_per_target = 0.0;
  double rel_time = 0.0;  // relative to the smallest successful value
  std::string status;     // "ok" or "failed"
  std::string error;
};

struct AblationGrid {
  AblationAxis axis = AblationAxis::K;
  std::vector<AblationRow> rows;  // sorted by value, infinity last

  // Header: axis_value,nll,mae,rmse,rel_time,status
  std::string to_csv() const;
  std::string summary() const;
};

struct AblationBase {
  const Dataset* data = nullptr;
  WindowSpec window;
  SamplerConfig sampler;
  ModelConfig model;
  TrainConfig train;
  // Runs whose estimated working set exceeds this fail without training.
  // 0 = unlimited.
  double memory_budget_mb = 0.0;
  std::size_t timing_targets = 64;
  std::size_t timing_reps = 5;
};

// Working-set estimate for one training run, in bytes.
double estimate_training_bytes(const ModelConfig& model, const SamplerConfig& s,
                               const TrainConfig& t, std::size_t threads);

// Trains and scores one model per value on the test pixels. A failing run is
// recorded and the sweep continues.
AblationGrid run_ablation(const AblationBase& base, AblationAxis axis,
                          std::span<const double> values,
                          const std::function<void(const AblationRow&)>& done = {});

struct InferenceTiming {
  std::vector<std::size_t> k;
  std::vector<double> seconds_per_target;  // median over repetitions
  std::vector<double> relative;            // to the smallest K
  std::vector<double> spread;              // (max - min) / median per K
};

// Times predict() on fixed targets for each K after one warm-up pass.
InferenceTiming time_inference(const ModelParams<float>& params,
                               const DemGrid& grid,
                               std::span<const MapCoord> targets,
                               const InferenceSetup& setup,
                               std::span<const std::size_t> k_values,
                               std::size_t reps = 5);

}  // namespace sanp
