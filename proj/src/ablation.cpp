#include "sanp/ablation.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sanp/errors.hpp"

namespace sanp {

AblationAxis parse_ablation_axis(std::string_view name) {
  if (name == "k") return AblationAxis::K;
  if (name == "alpha") return AblationAxis::Alpha;
  if (name == "dim") return AblationAxis::Dim;
  throw ContractError("unknown ablation axis '" + std::string(name) +
                      "' (expected k, alpha or dim)");
}

const char* ablation_axis_name(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::K: return "k";
    case AblationAxis::Alpha: return "alpha";
    case AblationAxis::Dim: return "dim";
  }
  return "?";
}

std::vector<double> default_ablation_values(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::K: return {50, 100, 200, 500};
    case AblationAxis::Alpha:
      return {kInfiniteAlpha, 8, 0.8, 0.4, 0.16, 0.08, 0};
    case AblationAxis::Dim: return {128, 256, 512, 768, 1024};
  }
  return {};
}

std::vector<double> parse_ablation_values(AblationAxis axis,
                                          std::string_view list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t end = list.find(',', pos);
    if (end == std::string_view::npos) end = list.size();
    std::string_view tok = list.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty()) throw ContractError("empty entry in value list");
    double v;
    if (tok == "inf") {
      if (axis != AblationAxis::Alpha)
        throw ContractError("'inf' is only valid on the alpha axis");
      v = kInfiniteAlpha;
    } else {
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw ContractError("bad value '" + std::string(tok) + "'");
      if (axis == AblationAxis::Alpha ? !(v >= 0) : !(v >= 1 && v == std::floor(v)))
        throw ContractError("invalid " + std::string(ablation_axis_name(axis)) +
                            " value '" + std::string(tok) + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

std::string format_axis_value(AblationAxis axis, double value) {
  if (std::isinf(value)) return "inf";
  if (axis != AblationAxis::Alpha) return std::to_string(std::llround(value));
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, p);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::general, 6);
  return std::string(buf, p);
}

}  // namespace

std::string AblationGrid::to_csv() const {
  std::ostringstream os;
  os << "axis_value,nll,mae,rmse,rel_time,status\n";
  for (const auto& r : rows) {
    os << format_axis_value(axis, r.value) << ',';
    if (r.metrics) {
      os << (r.metrics->nll ? fmt(*r.metrics->nll) : "") << ','
         << fmt(r.metrics->mae) << ',' << fmt(r.metrics->rmse) << ','
         << fmt(r.rel_time) << ',';
    } else {
      os << ",,,,";
    }
    os << r.status << '\n';
  }
  return os.str();
}

std::string AblationGrid::summary() const {
  std::ostringstream os;
  os << "ablation over " << ablation_axis_name(axis) << ": " << rows.size()
     << " values\n";
  const AblationRow* best = nullptr;
  for (const auto& r : rows) {
    os << "  " << ablation_axis_name(axis) << '=' << format_axis_value(axis, r.value)
       << ": ";
    if (r.metrics) {
      os << "nll " << fmt(r.metrics->nll.value_or(NAN)) << ", mae "
         << fmt(r.metrics->mae) << " m, rmse " << fmt(r.metrics->rmse)
         << " m, relative time " << fmt(r.rel_time) << '\n';
      if (!best || r.metrics->rmse < best->metrics->rmse) best = &r;
    } else {
      os << "failed (" << r.error << ")\n";
    }
  }
  if (best)
    os << "lowest rmse at " << ablation_axis_name(axis) << '='
       << format_axis_value(axis, best->value) << '\n';
  return os.str();
}

double estimate_training_bytes(const ModelConfig& model, const SamplerConfig& s,
                               const TrainConfig& t, std::size_t threads) {
  double params = 0;
  for (const auto& [name, shape] : parameter_layout(model))
    params += double(shape_size(shape));
  // params, grads, two moments, best snapshot with its moments, chunk partials
  const double param_copies = 7.0 + double(std::min(t.grad_chunks, t.batch));
  const double k = double(s.k), d = double(model.dim), h = double(model.hidden);
  const double heads = double(std::max(model.heads_enc, model.heads_dec));
  // values and gradients of one item's tape
  const double tape = 2.0 * (6.0 * k * h + 24.0 * k * d + 4.0 * heads * k * k + 4.0 * h);
  return 4.0 * (param_copies * params + double(threads) * tape);
}

AblationGrid run_ablation(const AblationBase& base, AblationAxis axis,
                          std::span<const double> values,
                          const std::function<void(const AblationRow&)>& done) {
  if (!base.data) throw ContractError("run_ablation: no dataset");
  if (values.empty()) throw ContractError("run_ablation: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ContractError("ablation values must be distinct");

  const Dataset& data = *base.data;
  std::vector<MapCoord> timing_targets;
  const auto& test = data.splits.test;
  if (test.empty()) throw DataError("ablation needs test pixels");
  const std::size_t nt = std::min(base.timing_targets, test.size());
  for (std::size_t i = 0; i < nt; ++i)
    timing_targets.push_back(data.truth.center(test[i * test.size() / nt]));

  AblationGrid grid;
  grid.axis = axis;
  for (double v : sorted) {
    AblationRow row;
    row.value = v;
    SamplerConfig sampler = base.sampler;
    ModelConfig model = base.model;
    switch (axis) {
      case AblationAxis::K: sampler.k = std::size_t(v); break;
      case AblationAxis::Alpha: sampler.alpha = v * 1000.0; break;
      case AblationAxis::Dim: model.dim = std::size_t(v); break;
    }
    try {
      if (base.memory_budget_mb > 0) {
        const double need = estimate_training_bytes(
            model, sampler, base.train, std::size_t(omp_get_max_threads()));
        if (need > base.memory_budget_mb * 1024.0 * 1024.0)
          throw ResourceError("estimated working set " +
                              std::to_string(need / (1024.0 * 1024.0)) +
                              " MB exceeds the " +
                              std::to_string(base.memory_budget_mb) + " MB budget");
      }
      TrainResult tr = train(data, base.window, sampler, model, base.train);
      InferenceSetup setup{base.window, sampler, data.stats};
      setup.sampler.seed = derive_seed(base.train.seed, 0x7e57);
      row.metrics = evaluate_heldout(tr.params, data, test, setup);
      const std::size_t k_only[] = {sampler.k};
      row.seconds_per_target =
          time_inference(tr.params, data.train_grid, timing_targets, setup,
                         k_only, base.timing_reps)
              .seconds_per_target[0];
      row.status = "ok";
    } catch (const std::exception& e) {
      row.metrics.reset();
      row.status = "failed";
      row.error = e.what();
    }
    grid.rows.push_back(row);
  }
  double ref = 0;
  for (const auto& r : grid.rows)
    if (r.metrics) {
      ref = r.seconds_per_target;
      break;
    }
  for (auto& r : grid.rows) {
    if (r.metrics && ref > 0) r.rel_time = r.seconds_per_target / ref;
    if (done) done(r);
  }
  return grid;
}

InferenceTiming time_inference(const ModelParams<float>& params,
                               const DemGrid& grid,
                               std::span<const MapCoord> targets,
                               const InferenceSetup& setup,
                               std::span<const std::size_t> k_values,
                               std::size_t reps) {
  if (targets.empty()) throw ContractError("time_inference: no targets");
  if (k_values.empty()) throw ContractError("time_inference: no K values");
  reps = std::max<std::size_t>(reps, 5);
  InferenceTiming out;
  for (std::size_t k : k_values) {
    InferenceSetup s = setup;
    s.sampler.k = k;
    predict(params, grid, targets, s);  // warm-up
    std::vector<double> t;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      predict(params, grid, targets, s);
      t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count() /
                  double(targets.size()));
    }
    std::sort(t.begin(), t.end());
    const double median = t[t.size() / 2];
    out.k.push_back(k);
    out.seconds_per_target.push_back(median);
    out.spread.push_back((t.back() - t.front()) / median);
  }
  const std::size_t smallest =
      std::size_t(std::min_element(out.k.begin(), out.k.end()) - out.k.begin());
  for (double s : out.seconds_per_target)
    out.relative.push_back(s / out.seconds_per_target[smallest]);
  return out;
}

}  // namespace sanp
