#pragma once
// Self-supervised training: sample B targets from the training pixels, draw
// K context points for each, minimize the mean Gaussian negative
// log-likelihood with Adam, and keep the parameters with the best validation
// NLL.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "sanp/dataset.hpp"
#include "sanp/metrics.hpp"
#include "sanp/model.hpp"
#include "sanp/optim.hpp"
#include "sanp/predict.hpp"
#include "sanp/sampling.hpp"

namespace sanp {

struct TrainConfig {
  std::size_t batch = 1024;
  std::size_t max_iters = 20000;
  std::size_t eval_every = 100;
  std::size_t patience = 20;  // evaluations without improvement
  std::uint64_t seed = 0;
  double learning_rate = 1e-4;
  bool augment = true;
  double clip_norm = 10.0;  // 0 disables
  // Validation pixels scored per evaluation (0 = all).
  std::size_t eval_points = 0;
  // Gradient partials are reduced over this many fixed item groups, so the
  // result does not depend on the thread count.
  std::size_t grad_chunks = 8;

  void validate() const;
};

struct EvalRecord {
  std::size_t iteration = 0;  // iterations completed
  double train_loss = 0.0;    // mean batch loss since the previous record
  MetricsReport valid;
  double seconds = 0.0;       // since training started
};

struct TrainReport {
  std::vector<EvalRecord> records;
  std::size_t best_iteration = 0;
  double best_valid_nll = 0.0;
  std::size_t iterations_run = 0;
  bool early_stopped = false;
};

struct TrainResult {
  ModelParams<float> params;  // best validation NLL
  AdamState<float> adam;      // optimizer state matching params
  TrainReport report;
};

// Mean NLL of a batch on one tape, in standardized units.
template <class T>
ad::Var<T> loss_batch(ad::Tape<T>& tape, const nn::BoundModel<T>& model,
                      std::span<const Triplet> batch);

// Mean batch NLL; grads (zeroed here) receive its gradient. Items run in
// parallel, each on its own tape.
template <class T>
double loss_and_gradient(const ModelParams<T>& params,
                         std::span<const Triplet> batch, ParamSet<T>& grads,
                         std::size_t chunks = 8);

namespace reference {
// Single-tape serial form of loss_and_gradient.
template <class T>
double loss_and_gradient(const ModelParams<T>& params,
                         std::span<const Triplet> batch, ParamSet<T>& grads);
}

using ProgressFn = std::function<void(const EvalRecord&)>;

// Throws DivergenceError when the loss stops being finite; when
// divergence_snapshot is non-empty the parameters at that point are saved
// there first.
TrainResult train(const Dataset& data, const WindowSpec& window,
                  const SamplerConfig& sampler, const ModelConfig& model,
                  const TrainConfig& cfg, const ProgressFn& progress = {},
                  const std::filesystem::path& divergence_snapshot = {});

// Metrics in meters on held-out pixels of data.truth, predicted from
// data.train_grid. Unpredictable pixels are skipped.
MetricsReport evaluate_heldout(const ModelParams<float>& params,
                               const Dataset& data,
                               std::span<const std::size_t> pixels,
                               const InferenceSetup& setup);

}  // namespace sanp
