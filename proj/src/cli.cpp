#include "sanp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "detail/byte_io.hpp"
#include "sanp/ablation.hpp"
#include "sanp/baselines.hpp"
#include "sanp/errors.hpp"
#include "sanp/model_io.hpp"
#include "sanp/png.hpp"
#include "sanp/synth.hpp"
#include "sanp/train.hpp"

namespace sanp::cli {

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  return fnv1a64(detail::read_file(path));
}

namespace {

namespace fs = std::filesystem;

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_alpha_km(const std::string& text) {
  if (text == "inf") return kInfiniteAlpha;
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || !(v >= 0))
    throw ContractError("--alpha-km must be a non-negative number or 'inf', got '" +
                        text + "'");
  return v * 1000.0;
}

struct TrainOpts {
  std::string dem;
  double window_km = 0.5;
  std::size_t k = 100;
  std::string alpha_km = "0.4";
  std::size_t dim = 512;
  std::size_t heads_enc = 2;
  std::size_t heads_dec = 2;
  std::size_t hidden = 1024;
  double sigma_floor = 1e-3;
  std::size_t batch = 1024;
  double lr = 1e-4;
  std::size_t iters = 20000;
  std::size_t eval_every = 100;
  std::size_t patience = 20;
  std::size_t eval_points = 0;
  std::size_t grad_chunks = 8;
  double clip = 10.0;
  std::uint64_t seed = 0;
  bool no_augment = false;
  std::uint64_t splits_seed = 0;
  std::size_t n_valid = 10000;
  std::size_t n_test = 10000;

  WindowSpec window() const {
    if (!(window_km > 0)) throw ContractError("--window-km must be > 0");
    return {window_km * 1000.0, window_km * 1000.0};
  }
  SamplerConfig sampler() const {
    SamplerConfig s;
    s.k = k;
    s.alpha = parse_alpha_km(alpha_km);
    s.seed = seed;
    s.validate();
    return s;
  }
  ModelConfig model() const {
    ModelConfig m;
    m.dim = dim;
    m.heads_enc = heads_enc;
    m.heads_dec = heads_dec;
    m.hidden = hidden;
    m.sigma_floor = sigma_floor;
    m.validate();
    return m;
  }
  TrainConfig train() const {
    TrainConfig t;
    t.batch = batch;
    t.max_iters = iters;
    t.eval_every = eval_every;
    t.patience = patience;
    t.seed = seed;
    t.learning_rate = lr;
    t.augment = !no_augment;
    t.clip_norm = clip;
    t.eval_points = eval_points;
    t.grad_chunks = grad_chunks;
    t.validate();
    return t;
  }
};

void add_split_options(CLI::App* app, std::uint64_t& seed, std::size_t& n_valid,
                       std::size_t& n_test) {
  app->add_option("--splits-seed", seed, "Seed of the validation/test split")
      ->capture_default_str();
  app->add_option("--n-valid", n_valid,
                  "Validation pixels (capped at 5% of observed pixels)")
      ->capture_default_str();
  app->add_option("--n-test", n_test,
                  "Test pixels (capped at 5% of observed pixels)")
      ->capture_default_str();
}

void add_train_options(CLI::App* app, TrainOpts& o) {
  app->add_option("--dem", o.dem, "Input raster (.asc or .sdem)")->required();
  app->add_option("--window-km", o.window_km, "Window width and height, km")
      ->capture_default_str();
  app->add_option("--k", o.k, "Context points per target")->capture_default_str();
  app->add_option("--alpha-km", o.alpha_km, "Sampling temperature, km ('inf' allowed)")
      ->capture_default_str();
  app->add_option("--dim", o.dim, "Latent dimension D")->capture_default_str();
  app->add_option("--heads-enc", o.heads_enc, "Self-attention heads")->capture_default_str();
  app->add_option("--heads-dec", o.heads_dec, "Cross-attention heads")->capture_default_str();
  app->add_option("--hidden", o.hidden, "MLP hidden width")->capture_default_str();
  app->add_option("--sigma-floor", o.sigma_floor, "Minimum std, standardized units")
      ->capture_default_str();
  app->add_option("--batch", o.batch, "Batch size B")->capture_default_str();
  app->add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
  app->add_option("--iters", o.iters, "Maximum iterations")->capture_default_str();
  app->add_option("--eval-every", o.eval_every, "Iterations between validations")
      ->capture_default_str();
  app->add_option("--patience", o.patience, "Validations without improvement before stopping")
      ->capture_default_str();
  app->add_option("--eval-points", o.eval_points, "Validation pixels per evaluation (0 = all)")
      ->capture_default_str();
  app->add_option("--grad-chunks", o.grad_chunks, "Fixed gradient reduction groups")
      ->capture_default_str();
  app->add_option("--clip", o.clip, "Global gradient norm clip (0 disables)")
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Training seed")->capture_default_str();
  app->add_flag("--no-augment", o.no_augment, "Disable rotation/scaling augmentation");
  add_split_options(app, o.splits_seed, o.n_valid, o.n_test);
}

SplitSpec resolve_splits(const DemGrid& grid, std::uint64_t seed,
                         std::size_t n_valid, std::size_t n_test,
                         std::ostream& out) {
  const std::size_t cap = std::max<std::size_t>(1, grid.observed_count() / 20);
  SplitSpec s{seed, std::min(n_valid, cap), std::min(n_test, cap)};
  if (s.n_valid != n_valid || s.n_test != n_test)
    out << "note: held-out sets capped at " << cap << " pixels each (5% of "
        << grid.observed_count() << " observed)\n";
  return s;
}

class Manifest {
 public:
  Manifest(std::string subcommand) { add("subcommand", std::move(subcommand)); }
  void add(const std::string& key, const std::string& value) {
    lines_ += key + "=" + value + "\n";
  }
  void checksum(const std::string& name, const fs::path& path) {
    add("input." + name + ".fnv1a64", hex64(file_checksum(path)));
  }
  void write(const fs::path& path, const CLI::App& app) const {
    std::string text = "# sanp run manifest\n";
    text += "tool.version=" + std::string(kToolVersion) + "\n";
    text += "format.version=1\n";
    text += lines_;
    for (const CLI::App* sub : app.get_subcommands()) {
      std::istringstream lines(sub->config_to_str(true, false));
      for (std::string line; std::getline(lines, line);) {
        if (line.empty() || line.ends_with("=\"\"")) continue;
        text += sub->get_name() + "." + line + "\n";
      }
    }
    std::vector<char> bytes(text.begin(), text.end());
    detail::write_file_atomic(path, bytes);
  }

 private:
  std::string lines_;
};

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest"); }

// --- synth -----------------------------------------------------------------

struct SynthOpts {
  std::size_t size = 256;
  std::uint64_t seed = 0;
  double roughness = 0.6;
  double cell_size = 5.0;
  double amplitude = 20.0;
  std::string void_spec = "none";
  std::uint64_t void_seed = 0;
  bool void_seed_set = false;
  std::string out;
  std::string out_voided;
};

int cmd_synth(const SynthOpts& o, const CLI::App& app, std::ostream& out) {
  if (!(o.roughness >= 0 && o.roughness <= 1))
    throw ContractError("--roughness must lie in [0, 1]");
  const VoidSpec vs = parse_void_spec(o.void_spec);
  const fs::path truth_path = o.out;
  fs::path voided_path = o.out_voided;
  if (voided_path.empty())
    voided_path = truth_path.parent_path() /
                  (truth_path.stem().string() + "_voided" + truth_path.extension().string());
  format_from_path(truth_path);
  format_from_path(voided_path);

  Manifest m("synth");
  m.add("resolved.out_voided", voided_path.string());
  m.write(manifest_path(truth_path), app);

  SynthSpec spec;
  spec.size = o.size;
  spec.seed = o.seed;
  spec.roughness = o.roughness;
  spec.cell_size = o.cell_size;
  spec.amplitude = o.amplitude;
  const DemGrid truth = synth_terrain(spec);
  const std::uint64_t void_seed = o.void_seed_set ? o.void_seed : derive_seed(o.seed, 0x401d);
  const DemGrid voided = punch_voids(truth, vs, void_seed);
  save_raster(truth, truth_path);
  save_raster(voided, voided_path);
  out << "wrote " << truth_path.string() << " and " << voided_path.string() << " ("
      << o.size << "x" << o.size << ", " << voided.void_count() << " void pixels, "
      << num(double(voided.void_count()) / double(voided.size())) << " of the grid)\n";
  return kOk;
}

// --- train -----------------------------------------------------------------

int cmd_train(const TrainOpts& o, const std::string& out_path, const CLI::App& app,
              std::ostream& out) {
  const WindowSpec window = o.window();
  const SamplerConfig sampler = o.sampler();
  const ModelConfig model = o.model();
  const TrainConfig tcfg = o.train();

  Manifest m("train");
  m.checksum("dem", o.dem);
  m.write(manifest_path(out_path), app);

  DemGrid grid = load_raster(o.dem);
  const SplitSpec split = resolve_splits(grid, o.splits_seed, o.n_valid, o.n_test, out);
  const Dataset data = Dataset::build(std::move(grid), split);
  out << "training on " << data.train_pixels.size() << " pixels, "
      << data.splits.valid.size() << " validation, " << data.splits.test.size()
      << " test\n";

  auto progress = [&](const EvalRecord& r) {
    out << "iter " << r.iteration << " loss " << num(r.train_loss) << " valid_nll "
        << num(*r.valid.nll) << " valid_mae " << num(r.valid.mae) << " valid_rmse "
        << num(r.valid.rmse) << " time " << num(std::round(r.seconds * 10) / 10) << "s\n"
        << std::flush;
  };
  const fs::path snapshot = out_path + ".diverged";
  TrainResult res = train(data, window, sampler, model, tcfg, progress, snapshot);

  ModelBundle b;
  b.params = std::move(res.params);
  b.window = window;
  b.k = sampler.k;
  b.alpha = sampler.alpha;
  b.stats = data.stats;
  b.adam = std::move(res.adam);
  save_model(out_path, b);

  std::string csv = "iteration,train_loss,valid_nll,valid_mae,valid_rmse\n";
  for (const auto& r : res.report.records)
    csv += std::to_string(r.iteration) + "," + num(r.train_loss) + "," +
           num(*r.valid.nll) + "," + num(r.valid.mae) + "," + num(r.valid.rmse) + "\n";
  detail::write_file_atomic(out_path + ".report.csv",
                            std::vector<char>(csv.begin(), csv.end()));
  out << "best validation nll " << num(res.report.best_valid_nll) << " at iteration "
      << res.report.best_iteration << (res.report.early_stopped ? " (early stop)" : "")
      << "; checkpoint " << out_path << "\n";
  return kOk;
}

// --- reconstruct -----------------------------------------------------------

struct ReconstructOpts {
  std::string dem;
  std::string checkpoint;
  std::string out_mean;
  std::string out_std;
  std::string png;
  std::uint64_t seed = 0;
  std::size_t dim = 0;  // 0 = take from checkpoint
  std::size_t k = 0;
  std::string alpha_km;
  double window_km = 0;
};

int cmd_reconstruct(const ReconstructOpts& o, const CLI::App& app, std::ostream& out) {
  format_from_path(o.out_mean);
  format_from_path(o.out_std);
  Manifest m("reconstruct");
  m.checksum("dem", o.dem);
  m.checksum("checkpoint", o.checkpoint);
  m.write(manifest_path(o.out_mean), app);

  const DemGrid grid = load_raster(o.dem);
  const ModelBundle b = load_model(o.checkpoint);
  if (o.dim != 0 && o.dim != b.params.config.dim)
    throw CompatibilityError("--dim " + std::to_string(o.dim) +
                             " does not match the checkpoint's latent dimension " +
                             std::to_string(b.params.config.dim));
  InferenceSetup setup;
  setup.window = o.window_km > 0 ? WindowSpec{o.window_km * 1000, o.window_km * 1000}
                                 : b.window;
  setup.sampler.k = o.k != 0 ? o.k : b.k;
  setup.sampler.alpha = o.alpha_km.empty() ? b.alpha : parse_alpha_km(o.alpha_km);
  setup.sampler.seed = o.seed;
  setup.stats = b.stats;
  try {
    setup.window.validate(grid.cell_size);
  } catch (const ContractError& e) {
    throw CompatibilityError(std::string("checkpoint window does not fit this raster: ") +
                             e.what());
  }

  std::vector<std::size_t> voids;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!grid.observed(i)) voids.push_back(i);
  std::vector<MapCoord> targets;
  for (std::size_t i : voids) targets.push_back(grid.center(i));
  const auto preds = predict(b.params, grid, targets, setup);

  DemGrid mean = grid;
  DemGrid stdev = grid;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.observed(i)) stdev.elevations[i] = 0.0f;
  std::size_t unpredictable = 0;
  for (std::size_t j = 0; j < voids.size(); ++j) {
    const std::size_t i = voids[j];
    if (!preds[j]) {
      ++unpredictable;
      continue;
    }
    mean.elevations[i] = static_cast<float>(preds[j]->mu);
    mean.nodata[i] = 0;
    stdev.elevations[i] = static_cast<float>(preds[j]->sigma);
    stdev.nodata[i] = 0;
  }
  save_raster(mean, o.out_mean);
  save_raster(stdev, o.out_std);
  if (!o.png.empty()) {
    write_png_greyscale(o.png + "_mean.png", mean);
    write_png_greyscale(o.png + "_std.png", stdev);
  }
  out << "filled " << voids.size() - unpredictable << " of " << voids.size()
      << " void pixels";
  if (unpredictable) out << " (" << unpredictable << " unpredictable, left void)";
  out << "\n";
  return kOk;
}

// --- evaluate --------------------------------------------------------------

struct EvaluateOpts {
  std::string dem;
  std::string checkpoint;
  std::string method;
  std::string pred_raster;
  std::uint64_t splits_seed = 0;
  std::size_t n_valid = 10000;
  std::size_t n_test = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

bool same_geometry(const DemGrid& a, const DemGrid& b) {
  return a.ncols == b.ncols && a.nrows == b.nrows && a.cell_size == b.cell_size &&
         a.x_origin == b.x_origin && a.y_origin == b.y_origin;
}

int cmd_evaluate(const EvaluateOpts& o, const CLI::App& app, std::ostream& out) {
  const int sources = int(!o.checkpoint.empty()) + int(!o.method.empty()) +
                      int(!o.pred_raster.empty());
  if (sources != 1)
    throw ContractError("give exactly one of --checkpoint, --method, --pred-raster");
  std::optional<InterpMethod> method;
  if (!o.method.empty()) method = parse_interp_method(o.method);

  Manifest m("evaluate");
  m.checksum("dem", o.dem);
  if (!o.checkpoint.empty()) m.checksum("checkpoint", o.checkpoint);
  if (!o.pred_raster.empty()) m.checksum("pred_raster", o.pred_raster);
  m.write(manifest_path(o.out), app);

  DemGrid grid = load_raster(o.dem);
  const SplitSpec split = resolve_splits(grid, o.splits_seed, o.n_valid, o.n_test, out);
  const Dataset data = Dataset::build(std::move(grid), split);
  const auto& test = data.splits.test;
  if (test.empty()) throw DataError("no held-out test pixels");
  std::vector<double> truth;
  std::vector<MapCoord> targets;
  for (std::size_t p : test) {
    truth.push_back(data.truth.elevations[p]);
    targets.push_back(data.truth.center(p));
  }

  MetricsReport report;
  std::string source;
  std::string extra;
  if (!o.checkpoint.empty()) {
    const ModelBundle b = load_model(o.checkpoint);
    InferenceSetup setup{b.window, SamplerConfig{b.k, b.alpha, o.seed}, b.stats};
    report = evaluate_heldout(b.params, data, test, setup);
    source = "checkpoint";
    if (report.n_points != test.size())
      extra += "unpredictable=" + std::to_string(test.size() - report.n_points) + "\n";
  } else if (method) {
    const Interpolated r = interpolate(*method, data.train_grid, targets);
    report = compute_metrics(r.values, truth);
    source = interp_method_name(*method);
    extra += "fallbacks=" + std::to_string(r.fallback_count(*method)) + "\n";
  } else {
    const DemGrid pred = load_raster(o.pred_raster);
    if (!same_geometry(pred, data.truth))
      throw DataError("prediction raster geometry differs from the truth raster");
    std::vector<double> values;
    for (std::size_t p : test) {
      if (!pred.observed(p))
        throw DataError("prediction raster has no value at held-out pixel " +
                        std::to_string(p));
      values.push_back(pred.elevations[p]);
    }
    report = compute_metrics(values, truth);
    source = "pred-raster";
  }

  std::string text = "source=" + source + "\n";
  text += "n_points=" + std::to_string(report.n_points) + "\n";
  if (report.nll) text += "nll=" + num(*report.nll) + "\n";
  text += "mae=" + num(report.mae) + "\n";
  text += "rmse=" + num(report.rmse) + "\n";
  text += extra;
  detail::write_file_atomic(o.out, std::vector<char>(text.begin(), text.end()));
  out << text;
  return kOk;
}

// --- ablate ----------------------------------------------------------------

struct AblateOpts {
  TrainOpts train;
  std::string axis;
  std::string values;
  double memory_budget_mb = 0;
  std::size_t timing_targets = 64;
  std::string out;
};

int cmd_ablate(const AblateOpts& o, const CLI::App& app, std::ostream& out) {
  const AblationAxis axis = parse_ablation_axis(o.axis);
  const std::vector<double> values = o.values.empty()
                                         ? default_ablation_values(axis)
                                         : parse_ablation_values(axis, o.values);
  AblationBase base;
  base.window = o.train.window();
  base.sampler = o.train.sampler();
  base.model = o.train.model();
  base.train = o.train.train();
  base.memory_budget_mb = o.memory_budget_mb;
  base.timing_targets = o.timing_targets;

  Manifest m("ablate");
  m.checksum("dem", o.train.dem);
  m.write(manifest_path(o.out), app);

  DemGrid grid = load_raster(o.train.dem);
  const SplitSpec split =
      resolve_splits(grid, o.train.splits_seed, o.train.n_valid, o.train.n_test, out);
  const Dataset data = Dataset::build(std::move(grid), split);
  base.data = &data;
  const AblationGrid result = run_ablation(base, axis, values);
  const std::string csv = result.to_csv();
  const std::string summary = result.summary();
  detail::write_file_atomic(o.out, std::vector<char>(csv.begin(), csv.end()));
  detail::write_file_atomic(o.out + ".summary.txt",
                            std::vector<char>(summary.begin(), summary.end()));
  out << summary;
  return kOk;
}

int exit_for(const std::exception& e, std::ostream& err, int code) {
  err << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse attentive neural process gap filling for elevation rasters",
               "sanp"};
  app.set_config("--manifest", "", "Load option values from a run manifest", false);
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SynthOpts so;
  auto* synth = app.add_subcommand("synth", "Generate a fractal test raster and a voided copy");
  synth->add_option("--size", so.size, "Grid side in pixels (>= 64)")->capture_default_str();
  synth->add_option("--seed", so.seed, "Terrain seed")->capture_default_str();
  synth->add_option("--roughness", so.roughness, "Amplitude persistence in [0, 1]")
      ->capture_default_str();
  synth->add_option("--cell-size", so.cell_size, "Cell size, meters")->capture_default_str();
  synth->add_option("--amplitude", so.amplitude, "Max |z - mean|, meters")->capture_default_str();
  synth->add_option("--void-spec", so.void_spec, "none | rect:F | blob:F | mixed:F")
      ->capture_default_str();
  auto* vseed = synth->add_option("--void-seed", so.void_seed, "Void placement seed");
  synth->add_option("--out", so.out, "Ground-truth raster path")->required();
  synth->add_option("--out-voided", so.out_voided,
                    "Voided raster path (default: <out stem>_voided<ext>)");

  TrainOpts to;
  std::string train_out;
  auto* trn = app.add_subcommand("train", "Train a model on a raster");
  add_train_options(trn, to);
  trn->add_option("--out", train_out, "Checkpoint path")->required();

  ReconstructOpts ro;
  auto* rec = app.add_subcommand("reconstruct", "Fill the voids of a raster");
  rec->add_option("--dem", ro.dem, "Raster with voids")->required();
  rec->add_option("--checkpoint", ro.checkpoint, "Trained model")->required();
  rec->add_option("--out-mean", ro.out_mean, "Filled raster")->required();
  rec->add_option("--out-std", ro.out_std, "Predictive std raster")->required();
  rec->add_option("--png", ro.png, "Write <prefix>_mean.png and <prefix>_std.png");
  rec->add_option("--seed", ro.seed, "Context sampling seed")->capture_default_str();
  rec->add_option("--dim", ro.dim, "Expected latent dimension (checked)");
  rec->add_option("--k", ro.k, "Override context size");
  rec->add_option("--alpha-km", ro.alpha_km, "Override sampling temperature, km");
  rec->add_option("--window-km", ro.window_km, "Override window size, km");

  EvaluateOpts eo;
  auto* ev = app.add_subcommand("evaluate", "Score predictions on held-out pixels");
  ev->add_option("--dem", eo.dem, "Ground-truth raster")->required();
  ev->add_option("--checkpoint", eo.checkpoint, "Trained model");
  ev->add_option("--method", eo.method, "Baseline: linear, cubic or nearest");
  ev->add_option("--pred-raster", eo.pred_raster, "Externally produced prediction raster");
  add_split_options(ev, eo.splits_seed, eo.n_valid, eo.n_test);
  ev->add_option("--seed", eo.seed, "Context sampling seed")->capture_default_str();
  ev->add_option("--out", eo.out, "Metrics file")->required();

  AblateOpts ao;
  auto* abl = app.add_subcommand("ablate", "Sweep K, alpha or D");
  add_train_options(abl, ao.train);
  abl->add_option("--axis", ao.axis, "k, alpha or dim")->required();
  abl->add_option("--values", ao.values, "Comma-separated values (alpha in km, 'inf' allowed)");
  abl->add_option("--memory-budget-mb", ao.memory_budget_mb,
                  "Fail runs whose estimated working set exceeds this (0 = unlimited)")
      ->capture_default_str();
  abl->add_option("--timing-targets", ao.timing_targets, "Targets per timing run")
      ->capture_default_str();
  abl->add_option("--out", ao.out, "CSV table path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    app.exit(e, out, err);
    return kUsage;
  }
  so.void_seed_set = vseed->count() > 0;

  try {
    if (*synth) return cmd_synth(so, app, out);
    if (*trn) return cmd_train(to, train_out, app, out);
    if (*rec) return cmd_reconstruct(ro, app, out);
    if (*ev) return cmd_evaluate(eo, app, out);
    if (*abl) return cmd_ablate(ao, app, out);
  } catch (const CompatibilityError& e) {
    return exit_for(e, err, kCompatibility);
  } catch (const ContractError& e) {
    return exit_for(e, err, kUsage);
  } catch (const Error& e) {
    return exit_for(e, err, kDataError);
  } catch (const std::filesystem::filesystem_error& e) {
    return exit_for(e, err, kDataError);
  } catch (const std::exception& e) {
    return exit_for(e, err, kFailure);
  }
  return kUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sanp::cli
