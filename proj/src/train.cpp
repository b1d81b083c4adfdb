#include "sanp/train.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "sanp/checkpoint.hpp"
#include "sanp/errors.hpp"

namespace sanp {

void TrainConfig::validate() const {
  if (batch < 1) throw ContractError("batch size must be >= 1");
  if (max_iters < 1) throw ContractError("max_iters must be >= 1");
  if (eval_every < 1) throw ContractError("eval_every must be >= 1");
  if (patience < 1) throw ContractError("patience must be >= 1");
  if (!(learning_rate >= 0)) throw ContractError("learning rate must be >= 0");
  if (!(clip_norm >= 0)) throw ContractError("clip norm must be >= 0");
  if (grad_chunks < 1) throw ContractError("grad_chunks must be >= 1");
}

namespace {

template <class T>
nn::GaussianHead<T> forward_item(ad::Tape<T>& tape,
                                 const nn::BoundModel<T>& model,
                                 const Triplet& item) {
  if (item.context.empty())
    throw ContractError("training triplet with an empty context");
  auto [xy, y] = nn::context_inputs(tape, item.context);
  auto enc = nn::encode(model, xy, y);
  return nn::decode(model, enc, tape.constant(Tensor<T>({1, 2})));
}

}  // namespace

template <class T>
ad::Var<T> loss_batch(ad::Tape<T>& tape, const nn::BoundModel<T>& model,
                      std::span<const Triplet> batch) {
  if (batch.empty()) throw ContractError("loss_batch: empty batch");
  std::vector<ad::Var<T>> mus, sigmas;
  std::vector<T> targets;
  for (const Triplet& item : batch) {
    auto head = forward_item(tape, model, item);
    mus.push_back(head.mu);
    sigmas.push_back(head.sigma);
    targets.push_back(T(item.target));
  }
  const std::size_t b = batch.size();
  return ad::gaussian_nll(tape.constant(Tensor<T>({b, 1}, std::move(targets))),
                          ad::concat_rows<T>(mus), ad::concat_rows<T>(sigmas));
}

template <class T>
double loss_and_gradient(const ModelParams<T>& params,
                         std::span<const Triplet> batch, ParamSet<T>& grads,
                         std::size_t chunks) {
  if (batch.empty()) throw ContractError("loss_and_gradient: empty batch");
  if (chunks < 1) throw ContractError("loss_and_gradient: chunks must be >= 1");
  const std::size_t b = batch.size();
  chunks = std::min(chunks, b);
  std::vector<ParamSet<T>> partial(chunks);
  std::vector<double> partial_loss(chunks, 0.0);
  std::exception_ptr failure;
  const T seed = T(1) / T(b);
  const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < nc; ++c) {
    try {
      ParamSet<T>& g = partial[std::size_t(c)];
      g = params.set.zeros_like();
      const std::size_t lo = b * std::size_t(c) / chunks;
      const std::size_t hi = b * (std::size_t(c) + 1) / chunks;
      for (std::size_t i = lo; i < hi; ++i) {
        ad::Tape<T> tape;
        auto model = nn::bind(tape, params, &g);
        auto head = forward_item(tape, model, batch[i]);
        auto nll = ad::gaussian_nll(
            tape.constant(Tensor<T>({1, 1}, std::vector<T>{T(batch[i].target)})),
            head.mu, head.sigma);
        partial_loss[std::size_t(c)] += double(tape.value(nll)[0]);
        tape.backward(nll, seed);
      }
    } catch (...) {
#pragma omp critical(sanp_train_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  grads = std::move(partial[0]);
  double loss = partial_loss[0];
  for (std::size_t c = 1; c < chunks; ++c) {
    for (std::size_t p = 0; p < grads.size(); ++p) {
      auto& dst = grads[p].values;
      const auto& src = partial[c][p].values;
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    loss += partial_loss[c];
  }
  return loss / double(b);
}

namespace reference {

template <class T>
double loss_and_gradient(const ModelParams<T>& params,
                         std::span<const Triplet> batch, ParamSet<T>& grads) {
  grads = params.set.zeros_like();
  ad::Tape<T> tape;
  auto model = nn::bind(tape, params, &grads);
  auto loss = loss_batch(tape, model, batch);
  tape.backward(loss);
  return double(tape.value(loss)[0]);
}

}  // namespace reference

MetricsReport evaluate_heldout(const ModelParams<float>& params,
                               const Dataset& data,
                               std::span<const std::size_t> pixels,
                               const InferenceSetup& setup) {
  if (pixels.empty()) throw ContractError("evaluate_heldout: empty held-out set");
  const auto start = std::chrono::steady_clock::now();
  std::vector<MapCoord> targets;
  targets.reserve(pixels.size());
  for (std::size_t p : pixels) {
    if (!data.truth.observed(p))
      throw DataError("held-out pixel " + std::to_string(p) + " has no truth value");
    targets.push_back(data.truth.center(p));
  }
  const auto preds = predict(params, data.train_grid, targets, setup);
  std::vector<PredictiveGaussian> kept;
  std::vector<double> truth;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!preds[i]) continue;
    kept.push_back(*preds[i]);
    truth.push_back(data.truth.elevations[pixels[i]]);
  }
  if (kept.empty()) throw DataError("no held-out pixel could be predicted");
  MetricsReport r = compute_metrics(kept, truth);
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

TrainResult train(const Dataset& data, const WindowSpec& window,
                  const SamplerConfig& sampler, const ModelConfig& model,
                  const TrainConfig& cfg, const ProgressFn& progress,
                  const std::filesystem::path& divergence_snapshot) {
  cfg.validate();
  model.validate();
  sampler.validate();
  window.validate(data.truth.cell_size);
  if (data.splits.valid.empty())
    throw DataError("training needs at least one validation pixel");

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };

  SamplerConfig train_sampler = sampler;
  train_sampler.seed = derive_seed(cfg.seed, 0x7a11);
  InferenceSetup setup{window, sampler, data.stats};
  setup.sampler.seed = derive_seed(cfg.seed, 0xe7a1);

  std::vector<std::size_t> valid = data.splits.valid;
  if (cfg.eval_points > 0 && valid.size() > cfg.eval_points) {
    // Evenly strided subset, fixed for the whole run.
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < cfg.eval_points; ++i)
      subset.push_back(valid[i * valid.size() / cfg.eval_points]);
    valid = std::move(subset);
  }

  TrainResult result;
  ModelParams<float> params = ModelParams<float>::init(model, cfg.seed);
  AdamConfig adam_cfg;
  adam_cfg.learning_rate = cfg.learning_rate;
  AdamState<float> adam = AdamState<float>::init(params.set, adam_cfg);
  ParamSet<float> grads;
  result.params = params;
  result.adam = adam;
  result.report.best_valid_nll = std::numeric_limits<double>::infinity();

  auto diverged = [&](std::size_t it, double loss) {
    if (!divergence_snapshot.empty())
      save_checkpoint(divergence_snapshot, params.set, &adam);
    throw DivergenceError(
        "training diverged at iteration " + std::to_string(it) + " (loss " +
            std::to_string(loss) + ")" +
            (divergence_snapshot.empty()
                 ? std::string()
                 : "; snapshot written to " + divergence_snapshot.string()),
        it);
  };

  double loss_sum = 0;
  std::size_t loss_count = 0, stale = 0;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const auto batch = sample_training_batch(data, window, train_sampler,
                                             cfg.batch, it, cfg.augment);
    // Non-finite parameters surface either as a NaN loss or as a NumericError
    // from an op that refuses NaN input; both mean the run diverged.
    double loss = std::numeric_limits<double>::quiet_NaN(), norm = 0;
    try {
      loss = loss_and_gradient(params, batch, grads, cfg.grad_chunks);
      norm = clip_global_norm(grads, cfg.clip_norm);
    } catch (const NumericError&) {
    }
    if (!std::isfinite(loss) || !std::isfinite(norm)) diverged(it, loss);
    adam_step(params.set, grads, adam);
    loss_sum += loss;
    ++loss_count;
    result.report.iterations_run = it + 1;

    if ((it + 1) % cfg.eval_every != 0 && it + 1 != cfg.max_iters) continue;
    EvalRecord rec;
    rec.iteration = it + 1;
    rec.train_loss = loss_sum / double(loss_count);
    try {
      rec.valid = evaluate_heldout(params, data, valid, setup);
    } catch (const NumericError&) {
      diverged(it, loss);
    } catch (const DomainError&) {  // NaN sigma
      diverged(it, loss);
    }
    if (!rec.valid.nll || !std::isfinite(*rec.valid.nll)) diverged(it, loss);
    rec.seconds = elapsed();
    loss_sum = 0;
    loss_count = 0;
    result.report.records.push_back(rec);
    if (progress) progress(rec);
    if (*rec.valid.nll < result.report.best_valid_nll) {
      result.report.best_valid_nll = *rec.valid.nll;
      result.report.best_iteration = it + 1;
      result.params = params;
      result.adam = adam;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      result.report.early_stopped = true;
      break;
    }
  }
  return result;
}

#define SANP_INSTANTIATE(T)                                                  \
  template ad::Var<T> loss_batch<T>(ad::Tape<T>&, const nn::BoundModel<T>&, \
                                    std::span<const Triplet>);               \
  template double loss_and_gradient<T>(const ModelParams<T>&,                \
                                       std::span<const Triplet>,             \
                                       ParamSet<T>&, std::size_t);           \
  template double reference::loss_and_gradient<T>(                           \
      const ModelParams<T>&, std::span<const Triplet>, ParamSet<T>&);

SANP_INSTANTIATE(float)
SANP_INSTANTIATE(double)

#undef SANP_INSTANTIATE

}  // namespace sanp
