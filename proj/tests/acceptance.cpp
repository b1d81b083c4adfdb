// Acceptance suite: one PASS/FAIL line per criterion.
//
// The default run uses the reduced profile (64x64 grid, D = 128, 2000
// iterations); --full switches criteria 4 and 5 to the 256x256, D = 512
// profile. --expect-fail lists criteria whose failure is known and documented;
// they still print FAIL but do not change the exit status.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "sanp/ablation.hpp"
#include "sanp/baselines.hpp"
#include "sanp/cli.hpp"
#include "sanp/synth.hpp"
#include "sanp/train.hpp"
#include "support/gradcheck.hpp"

using namespace sanp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every MetricsReport the suite produces, for the RMSE >= MAE check.
std::vector<MetricsReport> g_reports;

MetricsReport keep(MetricsReport m) {
  g_reports.push_back(m);
  return m;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

Outcome gradient_fidelity() {
  using V = ad::Var<double>;
  Rng rng = make_rng(101);
  auto rt = [&](Shape s) { return testing::random_tensor(std::move(s), rng, -2, 2); };
  auto pos = [&](Shape s) { return testing::random_tensor(std::move(s), rng, 0.3, 2); };
  auto contract = [](ad::Tape<double>& t, V x) {
    Tensor<double> w(t.shape(x));
    for (std::size_t i = 0; i < w.size(); ++i) w.values[i] = 0.3 + 0.17 * double(i % 7);
    return ad::sum(ad::mul(x, t.constant(w)));
  };
  struct Case {
    const char* name;
    std::vector<Tensor<double>> in;
    testing::Builder f;
  };
  std::vector<Case> cases = {
      {"matmul", {rt({3, 4}), rt({4, 2})},
       [&](auto& t, auto& v) { return contract(t, ad::matmul(v[0], v[1])); }},
      {"matmul_nt", {rt({3, 4}), rt({5, 4})},
       [&](auto& t, auto& v) { return contract(t, ad::matmul_nt(v[0], v[1])); }},
      {"affine", {rt({3, 4}), rt({4, 2}), rt({2})},
       [&](auto& t, auto& v) { return contract(t, ad::affine(v[0], v[1], std::optional(v[2]))); }},
      {"add_row_bias", {rt({3, 4}), rt({4})},
       [&](auto& t, auto& v) { return contract(t, ad::add_row_bias(v[0], v[1])); }},
      {"add", {rt({2, 3}), rt({2, 3})},
       [&](auto& t, auto& v) { return contract(t, ad::add(v[0], v[1])); }},
      {"mul", {rt({2, 3}), rt({2, 3})},
       [&](auto& t, auto& v) { return contract(t, ad::mul(v[0], v[1])); }},
      {"scale", {rt({2, 3})}, [&](auto& t, auto& v) { return contract(t, ad::scale(v[0], -1.7)); }},
      {"add_scalar", {rt({2, 3})},
       [&](auto& t, auto& v) { return contract(t, ad::mul(ad::add_scalar(v[0], 0.4), v[0])); }},
      {"relu", {rt({3, 5})}, [&](auto& t, auto& v) { return contract(t, ad::relu(v[0])); }},
      {"softplus", {rt({3, 5})}, [&](auto& t, auto& v) { return contract(t, ad::softplus(v[0])); }},
      {"softmax_rows", {rt({3, 5})},
       [&](auto& t, auto& v) { return contract(t, ad::softmax_rows(v[0])); }},
      {"sum", {rt({3, 2})}, [](auto&, auto& v) { return ad::sum(ad::mul(v[0], v[0])); }},
      {"slice_cols", {rt({3, 5})},
       [&](auto& t, auto& v) { return contract(t, ad::slice_cols(v[0], 1, 3)); }},
      {"concat_rows", {rt({2, 3}), rt({1, 3})},
       [&](auto& t, auto& v) { return contract(t, ad::concat_rows<double>(v)); }},
      {"gaussian_nll", {rt({4, 1}), rt({4, 1}), pos({4, 1})},
       [](auto&, auto& v) { return ad::gaussian_nll(v[0], v[1], v[2]); }},
  };
  double worst = 0;
  std::string where;
  std::size_t checked = 0;
  for (const auto& c : cases) {
    const auto r = testing::check_gradients(c.in, c.f, 1e-4);
    checked += r.checked;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      where = std::string(c.name) + " " + r.worst;
    }
  }
  ModelConfig mc;
  mc.dim = 8;
  mc.hidden = 8;
  auto params = ModelParams<double>::init(mc, 5);
  for (std::size_t i = 0; i < params.set.size(); ++i)
    for (auto& v : params.set[i].values) v += uniform(rng, -0.1, 0.1);
  std::vector<Triplet> batch{testing::random_triplet(5, rng), testing::random_triplet(5, rng)};
  const auto full = testing::check_model_gradients(params, batch, 1e-4);
  checked += full.checked;
  if (full.max_rel_error >= worst) {
    worst = full.max_rel_error;
    where = "pipeline " + full.worst;
  }
  return {worst < 1e-4,
          fmt("%zu partials, max relative error %.2e (limit 1e-4) at %s", checked, worst,
              where.c_str())};
}

// ---------------------------------------------------------------- criterion 2

Outcome permutation_invariance() {
  const ModelConfig mc;  // D = 512, hidden 1024, 2 + 2 heads
  auto params = ModelParams<float>::init(mc, 7);
  Rng rng = make_rng(202);
  for (std::size_t i = 0; i < params.set.size(); ++i)
    for (auto& v : params.set[i].values) v += float(uniform(rng, -0.05, 0.05));
  ContextSet ctx;
  for (int i = 0; i < 100; ++i)
    ctx.push_back(float(uniform(rng, -1, 1)), float(uniform(rng, -1, 1)),
                  float(uniform(rng, -2, 2)));
  const auto base = predict_standardized(params, ctx);
  std::vector<std::size_t> perm(100);
  std::iota(perm.begin(), perm.end(), 0);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    ContextSet p;
    for (std::size_t i : perm) p.push_back(ctx.xy[i][0], ctx.xy[i][1], ctx.y[i]);
    const auto out = predict_standardized(params, p);
    worst = std::max({worst, std::abs(out.mu - base.mu), std::abs(out.sigma - base.sigma)});
  }
  return {worst < 1e-6, fmt("K=100, D=512, 100 permutations: max shift %.2e (limit 1e-6); "
                            "mu %.4f sigma %.4f",
                            worst, base.mu, base.sigma)};
}

// ---------------------------------------------------------------- criterion 3

Outcome sampler_correctness() {
  Rng rng = make_rng(303);
  std::size_t knn_cases = 0, knn_bad = 0;
  for (int grid_i = 0; grid_i < 4; ++grid_i) {
    DemGrid g = DemGrid::filled(64, 64, 5.0);
    for (auto& m : g.nodata) m = uniform01(rng) < 0.25;
    const auto win_all = [&](std::size_t t) {
      return extract_window(g, g.center(t), {64 * 10.0, 64 * 10.0});
    };
    for (int t_i = 0; t_i < 25; ++t_i) {
      const std::size_t t = uniform_index(rng, g.size());
      const MapCoord at = g.center(t);
      const auto win = win_all(t);
      const std::size_t k = 1 + uniform_index(rng, 500);
      Rng r2 = make_rng(t_i);
      const auto got = sample_context(win, at, {k, 0.0, 0}, r2);
      // brute force over the whole grid, ordered by (squared distance, index)
      std::vector<std::pair<double, std::size_t>> d;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.observed(i) || i == t) continue;
        const MapCoord c = g.center(i);
        d.push_back({(c.east - at.east) * (c.east - at.east) +
                         (c.north - at.north) * (c.north - at.north),
                     i});
      }
      std::sort(d.begin(), d.end());
      std::set<std::size_t> want, have;
      for (std::size_t i = 0; i < k; ++i) want.insert(d[i].second);
      for (const auto& o : got) have.insert(o.index);
      ++knn_cases;
      knn_bad += want != have;
    }
  }
  std::vector<Observation> ring;
  for (std::size_t i = 0; i < 4; ++i) {
    const double a = std::numbers::pi / 2 * double(i);
    ring.push_back({{10 * std::cos(a), 10 * std::sin(a)}, 0.0f, i});
  }
  std::array<int, 4> hits{};
  for (int i = 0; i < 100000; ++i)
    ++hits[sample_context(ring, {0, 0}, {1, kInfiniteAlpha, 0}, rng)[0].index];
  double dev = 0;
  for (int h : hits) dev = std::max(dev, std::abs(h / 1e5 - 0.25));

  DemGrid g = DemGrid::filled(21, 21, 5.0);
  const MapCoord at = g.center(10, 10);
  const auto win = extract_window(g, at, {100.0, 100.0});
  std::size_t hits_target = 0;
  for (int i = 0; i < 10000; ++i) {
    const double alpha = i % 3 == 0 ? 0.0 : (i % 3 == 1 ? 20.0 : kInfiniteAlpha);
    for (const auto& o : sample_context(win, at, {50, alpha, 0}, rng))
      hits_target += o.index == g.index(10, 10);
  }
  const bool pass = knn_bad == 0 && dev <= 0.01 && hits_target == 0;
  return {pass, fmt("alpha=0 vs brute-force KNN: %zu/%zu exact; alpha=inf max marginal "
                    "deviation %.4f (limit 0.01); target drawn %zu times in 10^4 sets",
                    knn_cases - knn_bad, knn_cases, dev, hits_target)};
}

// ----------------------------------------------------------- criteria 4 and 5

struct Profile {
  std::string name;
  std::size_t size, dim, hidden, batch, iters, k;
  double cell_size, roughness, alpha_m, window_m, lr;
};

Profile reduced_profile() {
  // Same 1.28 km terrain extent as the full profile at 4x coarser cells, so
  // the window (0.5 km) and alpha (0.4 km) keep their literal values.
  return {"reduced", 64, 128, 1024, 32, 2000, 100, 20.0, 0.6, 400.0, 500.0, 1e-3};
}

Profile full_profile() {
  return {"full", 256, 512, 1024, 1024, 20000, 100, 5.0, 0.6, 400.0, 500.0, 1e-4};
}

struct Scores {
  MetricsReport sanp, linear, nearest, constant;
  std::size_t iterations = 0;
  double seconds = 0;
};

struct Study {
  Profile prof;
  Dataset data;
};

Study make_study(const Profile& p) {
  SynthSpec s;
  s.size = p.size;
  s.seed = 2024;
  s.roughness = p.roughness;
  s.cell_size = p.cell_size;
  DemGrid g = synth_terrain(s);
  const std::size_t five_pct = g.size() / 20;
  return {p, Dataset::build(std::move(g), {77, five_pct, five_pct})};
}

Scores train_and_score(const Study& st, double alpha_m, bool with_baselines) {
  const auto start = std::chrono::steady_clock::now();
  const Profile& p = st.prof;
  const WindowSpec window{p.window_m, p.window_m};
  const SamplerConfig sampler{p.k, alpha_m, 0};
  ModelConfig mc;
  mc.dim = p.dim;
  mc.hidden = p.hidden;
  TrainConfig tc;
  tc.batch = p.batch;
  tc.max_iters = p.iters;
  tc.learning_rate = p.lr;
  tc.seed = 31;
  tc.eval_every = std::max<std::size_t>(1, p.iters / 20);
  const auto result = train(st.data, window, sampler, mc, tc);
  Scores s;
  s.iterations = result.report.iterations_run;
  InferenceSetup setup{window, sampler, st.data.stats};
  setup.sampler.seed = 4242;
  s.sanp = keep(evaluate_heldout(result.params, st.data, st.data.splits.test, setup));
  if (with_baselines) {
    std::vector<MapCoord> targets;
    std::vector<double> truth;
    for (std::size_t px : st.data.splits.test) {
      targets.push_back(st.data.truth.center(px));
      truth.push_back(st.data.truth.elevations[px]);
    }
    s.linear = keep(compute_metrics(interp_linear(st.data.train_grid, targets).values, truth));
    s.nearest = keep(compute_metrics(interp_nearest(st.data.train_grid, targets).values, truth));
    s.constant = keep(constant_gaussian_metrics(st.data.stats.mean, st.data.stats.std, truth));
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

Outcome end_to_end_ordering(const Scores& s) {
  const bool pass = s.sanp.mae < s.linear.mae && s.linear.mae < s.nearest.mae &&
                    *s.sanp.nll < *s.constant.nll;
  return {pass, fmt("MAE sanp %.4f, linear %.4f, nearest %.4f (need sanp < linear < nearest); "
                    "NLL sanp %.4f vs constant Gaussian %.4f; %zu iterations, %.0f s",
                    s.sanp.mae, s.linear.mae, s.nearest.mae, *s.sanp.nll, *s.constant.nll,
                    s.iterations, s.seconds)};
}

Outcome temperature_trend(const Scores& at_default, double default_alpha, const Study& st) {
  const Scores inf = train_and_score(st, kInfiniteAlpha, false);
  const Scores zero = train_and_score(st, 0.0, false);
  const double best = std::min(at_default.sanp.rmse, zero.sanp.rmse);
  const double ratio = inf.sanp.rmse / best;
  return {ratio >= 2.0,
          fmt("RMSE alpha=inf %.4f, alpha=%.2f km %.4f, alpha=0 %.4f; ratio to best finite "
              "%.2f (need >= 2)",
              inf.sanp.rmse, default_alpha / 1000, at_default.sanp.rmse, zero.sanp.rmse, ratio)};
}

// ---------------------------------------------------------------- criterion 6

Outcome inference_scaling() {
  SynthSpec s;
  s.size = 64;
  s.seed = 5;
  const DemGrid g = synth_terrain(s);
  const ModelConfig mc;  // default widths
  const auto params = ModelParams<float>::init(mc, 3);
  InferenceSetup setup{{500.0, 500.0}, {100, 400.0, 9}, elevation_stats(g)};
  std::vector<MapCoord> targets;
  Rng rng = make_rng(606);
  for (int i = 0; i < 32; ++i) {
    // keep targets away from the border so every window holds > 400 points
    const std::size_t r = 24 + uniform_index(rng, 16), c = 24 + uniform_index(rng, 16);
    targets.push_back(g.center(r, c));
  }
  const std::vector<std::size_t> ks{50, 100, 200, 400};
  const auto t = time_inference(params, g, targets, setup, ks, 5);
  bool monotone = true;
  for (std::size_t i = 1; i < ks.size(); ++i)
    monotone = monotone && t.seconds_per_target[i] >= t.seconds_per_target[i - 1];
  const double ratio = t.seconds_per_target[3] / t.seconds_per_target[1];
  std::string times;
  for (std::size_t i = 0; i < ks.size(); ++i)
    times += fmt("%sK=%zu %.2f ms (spread %.0f%%)", i ? ", " : "", ks[i],
                 t.seconds_per_target[i] * 1e3, t.spread[i] * 100);
  return {monotone && ratio >= 2 && ratio <= 8,
          fmt("%s; t(400)/t(100) = %.2f (band [2, 8]), monotone %s", times.c_str(), ratio,
              monotone ? "yes" : "no")};
}

// ---------------------------------------------------------------- criterion 7

Outcome metric_oracles() {
  Rng rng = make_rng(707);
  const std::size_t n = 10000;
  std::vector<PredictiveGaussian> p(n);
  std::vector<double> y(n), mu(n);
  long double abs = 0, sq = 0, nll = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = {uniform(rng, -50, 50), uniform(rng, 0.01, 20)};
    mu[i] = p[i].mu;
    y[i] = uniform(rng, -50, 50);
    const long double e = (long double)y[i] - p[i].mu;
    const long double z = e / p[i].sigma;
    abs += std::fabs(e);
    sq += e * e;
    nll += 0.5L * std::log(2 * std::numbers::pi_v<long double>) +
           std::log((long double)p[i].sigma) + 0.5L * z * z;
  }
  const auto m = keep(compute_metrics(p, y));
  const auto point = keep(compute_metrics(mu, y));
  const double err = std::max({std::abs(m.mae - double(abs / n)),
                               std::abs(m.rmse - double(std::sqrt(sq / n))),
                               std::abs(*m.nll - double(nll / n)),
                               std::abs(point.mae - m.mae), std::abs(point.rmse - m.rmse)});
  // a constant error vector makes RMSE and MAE equal up to rounding
  keep(compute_metrics(std::vector<double>(1000, 0.1), std::vector<double>(1000, 0.0)));
  std::size_t violations = 0;
  for (const auto& r : g_reports) violations += r.rmse < r.mae;
  return {err <= 1e-9 && violations == 0,
          fmt("max deviation from long-double reference %.2e (limit 1e-9); RMSE >= MAE on "
              "%zu/%zu reports emitted by this run",
              err, g_reports.size() - violations, g_reports.size())};
}

// ---------------------------------------------------------------- criterion 8

Outcome baseline_exactness() {
  Rng rng = make_rng(808);
  double worst = 0;
  std::size_t points = 0, fallbacks = 0;
  for (int trial = 0; trial < 5; ++trial) {
    // dyadic coefficients on a unit grid keep every stored value exact in f32
    const double a = double(int(uniform_index(rng, 17)) - 8) / 8;
    const double b = double(int(uniform_index(rng, 17)) - 8) / 8;
    const double c = double(int(uniform_index(rng, 64)) - 32);
    DemGrid g = DemGrid::filled(48, 48, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const MapCoord p = g.center(i);
      g.elevations[i] = float(a * p.east + b * p.north + c);
    }
    std::vector<MapCoord> t;
    for (int i = 0; i < 200; ++i)  // interior: the 4x4 stencil fits
      t.push_back({uniform(rng, 2.5, 45.5), uniform(rng, 2.5, 45.5)});
    for (auto m : {InterpMethod::Linear, InterpMethod::Cubic}) {
      const auto r = interpolate(m, g, t);
      fallbacks += r.fallback_count(m);
      for (std::size_t i = 0; i < t.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - (a * t[i].east + b * t[i].north + c)));
    }
    points += t.size();
  }
  return {worst <= 1e-6 && fallbacks == 0,
          fmt("%zu interior queries per method on 5 random planes: max error %.2e (limit "
              "1e-6), %zu fallbacks",
              points, worst, fallbacks)};
}

// ---------------------------------------------------------------- criterion 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "sanp_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const char* f) { return (dir / f).string(); };
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) { return cli::run(args, sink, sink); };
  int rc = run({"synth", "--size", "64", "--seed", "9", "--void-spec", "blob:0.1", "--out",
                p("dem.sdem")});
  const std::vector<std::string> train = {
      "train",      "--dem",   p("dem_voided.sdem"), "--window-km", "0.1", "--k", "20",
      "--alpha-km", "0.05",    "--dim",              "32",          "--hidden", "64",
      "--batch",    "16",      "--iters",            "30",          "--eval-every", "10",
      "--out",      p("a.ckpt")};
  rc = rc ? rc : run(train);
  fs::copy_file(p("a.ckpt"), p("first.ckpt"));
  rc = rc ? rc : run({"--manifest", p("a.ckpt.manifest"), "train"});
  const bool same_ckpt = rc == 0 && slurp(p("a.ckpt")) == slurp(p("first.ckpt"));
  rc = rc ? rc : run({"reconstruct", "--dem", p("dem.sdem"), "--checkpoint", p("a.ckpt"),
                      "--out-mean", p("mean.sdem"), "--out-std", p("std.sdem")});
  const bool same_dem = rc == 0 && slurp(p("mean.sdem")) == slurp(p("dem.sdem"));
  const std::size_t bytes = fs::exists(p("a.ckpt")) ? fs::file_size(p("a.ckpt")) : 0;
  fs::remove_all(dir);
  return {same_ckpt && same_dem,
          fmt("train rerun from manifest: checkpoints (%zu bytes) %s; void-free reconstruct "
              "%s the input (exit code %d)",
              bytes, same_ckpt ? "byte-identical" : "DIFFER", same_dem ? "reproduces" : "CHANGES",
              rc)};
}

// --------------------------------------------------------------- criterion 10

Outcome augmentation_contract() {
  Rng rng = make_rng(1010);
  ContextSet c;
  for (int i = 0; i < 200; ++i)
    c.push_back(float(uniform(rng, -1, 1)), float(uniform(rng, -1, 1)),
                float(uniform(rng, -3, 3)));
  const ContextSet id = augment(c, {0.0, 1.0});
  const bool identity = id.xy == c.xy && id.y == c.y;
  double worst = 0;
  bool scaled = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto ap = AugmentParams::draw(rng);
    const ContextSet o = augment(c, ap);
    for (std::size_t i = 0; i < c.size(); ++i) {
      scaled = scaled && o.y[i] == float(double(c.y[i]) * ap.scale);
      for (std::size_t j = i + 1; j < c.size(); j += 7) {
        const double before = std::hypot(c.xy[i][0] - c.xy[j][0], c.xy[i][1] - c.xy[j][1]);
        const double after = std::hypot(o.xy[i][0] - o.xy[j][0], o.xy[i][1] - o.xy[j][1]);
        worst = std::max(worst, std::abs(after - before));
      }
    }
  }
  return {identity && scaled && worst <= 1e-6,
          fmt("identity %s; max pairwise distance change %.2e (limit 1e-6); elevations "
              "scaled exactly %s",
              identity ? "holds" : "BROKEN", worst, scaled ? "yes" : "NO")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  bool full = false;
  std::vector<int> only, expect_fail;
  std::size_t iters = 0, batch = 0;
  app.add_flag("--full", full, "Run criteria 4 and 5 on the full 256x256, D=512 profile");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail,
                 "Criteria whose FAIL is known and documented; they do not set the exit code")
      ->delimiter(',');
  app.add_option("--iters", iters, "Override the profile's iteration count");
  app.add_option("--batch", batch, "Override the profile's batch size");
  CLI11_PARSE(app, argc, argv);

  Profile prof = full ? full_profile() : reduced_profile();
  if (iters) prof.iters = iters;
  if (batch) prof.batch = batch;
  auto wanted = [&](int c) {
    return only.empty() || std::find(only.begin(), only.end(), c) != only.end();
  };

  int failed = 0, passed = 0, expected = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    if (!wanted(id)) return;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end();
    std::printf("%s [%d] %s: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), s, !o.pass && known ? " [expected]" : "");
    std::fflush(stdout);
    if (o.pass) ++passed;
    else if (known) ++expected;
    else ++failed;
  };

  report(1, "gradient fidelity", gradient_fidelity);
  report(2, "permutation invariance", permutation_invariance);
  report(3, "sampler correctness", sampler_correctness);
  if (wanted(4) || wanted(5)) {
    std::printf("# %s profile: %zux%zu grid at %.0f m, D=%zu, hidden=%zu, B=%zu, K=%zu, "
                "alpha=%.2f km, window=%.2f km, lr=%g, %zu iterations\n",
                prof.name.c_str(), prof.size, prof.size, prof.cell_size, prof.dim, prof.hidden,
                prof.batch, prof.k, prof.alpha_m / 1000, prof.window_m / 1000, prof.lr,
                prof.iters);
    std::fflush(stdout);
    const Study st = make_study(prof);
    std::optional<Scores> main_run;
    report(4, "end-to-end ordering", [&] {
      main_run = train_and_score(st, prof.alpha_m, true);
      return end_to_end_ordering(*main_run);
    });
    report(5, "temperature ablation trend", [&] {
      if (!main_run) main_run = train_and_score(st, prof.alpha_m, true);
      return temperature_trend(*main_run, prof.alpha_m, st);
    });
  }
  report(6, "inference-time scaling", inference_scaling);
  report(8, "baseline exactness", baseline_exactness);
  report(9, "reproducibility", reproducibility);
  report(10, "augmentation contract", augmentation_contract);
  // last, so the RMSE >= MAE sweep covers every report emitted above
  report(7, "metric oracles", metric_oracles);

  std::printf("acceptance: %d passed, %d failed, %d expected failures\n", passed, failed,
              expected);
  return failed == 0 ? 0 : 1;
}
