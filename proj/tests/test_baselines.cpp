#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sanp/ablation.hpp"
#include "sanp/baselines.hpp"
#include "sanp/errors.hpp"
#include "sanp/metrics.hpp"
#include "sanp/rng.hpp"

using namespace sanp;

namespace {

DemGrid plane_grid(std::size_t n, double a, double b, double c) {
  DemGrid g = DemGrid::filled(n, n, 5.0);
  g.x_origin = 200;
  g.y_origin = 400;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const MapCoord p = g.center(i);
    g.elevations[i] = float(a * (p.east - 200) + b * (p.north - 400) + c);
  }
  return g;
}

double plane_at(MapCoord p, double a, double b, double c) {
  return a * (p.east - 200) + b * (p.north - 400) + c;
}

// Independent nearest oracle: full scan, strict < keeps the lowest index.
double brute_nearest(const DemGrid& g, MapCoord p) {
  double best = INFINITY, value = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.observed(i)) continue;
    const MapCoord c = g.center(i);
    const double d = (c.east - p.east) * (c.east - p.east) +
                     (c.north - p.north) * (c.north - p.north);
    if (d < best) {
      best = d;
      value = g.elevations[i];
    }
  }
  return value;
}

MapCoord random_point(const DemGrid& g, Rng& rng, double margin_cells = 0) {
  const double m = margin_cells * g.cell_size;
  return {uniform(rng, g.x_origin + m, g.x_origin + g.ncols * g.cell_size - m),
          uniform(rng, g.y_origin + m, g.y_origin + g.nrows * g.cell_size - m)};
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_interp_method("cubic") == InterpMethod::Cubic);
  CHECK(std::string(interp_method_name(InterpMethod::Linear)) == "linear");
  CHECK_THROWS_AS(parse_interp_method("spline"), ContractError);
}

TEST_CASE("cubic kernel") {
  CHECK(cubic_kernel(0) == 1);
  CHECK(cubic_kernel(1) == 0);
  CHECK(cubic_kernel(2) == 0);
  CHECK(cubic_kernel(2.5) == 0);
  // partition of unity
  for (double t : {0.1, 0.37, 0.5, 0.93}) {
    const double s = cubic_kernel(1 + t) + cubic_kernel(t) + cubic_kernel(1 - t) +
                     cubic_kernel(2 - t);
    CHECK(std::abs(s - 1) < 1e-12);
  }
  CHECK(cubic_kernel(0.5) == doctest::Approx(0.5625));
}

TEST_CASE("nearest") {
  SUBCASE("single observed pixel") {
    DemGrid g = DemGrid::filled(5, 5, 1.0);
    std::fill(g.nodata.begin(), g.nodata.end(), 1);
    g.nodata[g.index(2, 3)] = 0;
    g.elevations[g.index(2, 3)] = 9.5f;
    const MapCoord t[] = {g.center(2, 2), g.center(0, 0)};
    const auto r = interp_nearest(g, t);
    CHECK(r.values[0] == 9.5);
    CHECK(r.values[1] == 9.5);
  }
  SUBCASE("equidistant tie goes to the lower index") {
    DemGrid g = DemGrid::filled(3, 3, 1.0);
    std::fill(g.nodata.begin(), g.nodata.end(), 1);
    for (auto [r, c, v] : {std::tuple{1, 0, 1.0f}, {0, 1, 2.0f}, {1, 2, 3.0f}, {2, 1, 4.0f}}) {
      g.nodata[g.index(r, c)] = 0;
      g.elevations[g.index(r, c)] = v;
    }
    const MapCoord t[] = {g.center(1, 1)};
    CHECK(interp_nearest(g, t).values[0] == 2.0);
  }
  SUBCASE("matches a brute-force scan on 32x32 grids") {
    Rng rng = make_rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      DemGrid g = DemGrid::filled(32, 32, 5.0);
      const double voids = uniform(rng, 0.1, 0.98);
      for (std::size_t i = 0; i < g.size(); ++i) {
        g.elevations[i] = float(uniform(rng, -10, 10));
        g.nodata[i] = uniform01(rng) < voids;
      }
      g.nodata[uniform_index(rng, g.size())] = 0;
      std::vector<MapCoord> t;
      for (int i = 0; i < 200; ++i) t.push_back(random_point(g, rng));
      for (std::size_t i = 0; i < g.size(); i += 7) t.push_back(g.center(i));
      const auto r = interp_nearest(g, t);
      for (std::size_t i = 0; i < t.size(); ++i) REQUIRE(r.values[i] == brute_nearest(g, t[i]));
    }
  }
  SUBCASE("errors") {
    DemGrid g = DemGrid::filled(3, 3, 1.0);
    const MapCoord outside[] = {{-5, -5}};
    CHECK_THROWS_AS(interp_nearest(g, outside), BoundsError);
    std::fill(g.nodata.begin(), g.nodata.end(), 1);
    const MapCoord inside[] = {g.center(1, 1)};
    CHECK_THROWS_AS(interp_nearest(g, inside), DataError);
  }
}

TEST_CASE("linear and cubic") {
  SUBCASE("pixel centers return the pixel value") {
    Rng rng = make_rng(1);
    DemGrid g = DemGrid::filled(9, 9, 2.0);
    for (auto& v : g.elevations) v = float(uniform(rng, -5, 5));
    std::vector<MapCoord> t;
    for (std::size_t i = 0; i < g.size(); ++i) t.push_back(g.center(i));
    for (auto m : {InterpMethod::Linear, InterpMethod::Cubic}) {
      const auto r = interpolate(m, g, t);
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(r.values[i] - g.elevations[i]) < 1e-6);
      // a 4x4 stencil cannot enclose targets in the outermost ring
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t row = g.row_of(i), col = g.col_of(i);
        const bool border = row == 0 || col == 0 || row + 1 == g.nrows || col + 1 == g.ncols;
        if (m == InterpMethod::Linear || !border) CHECK(r.used[i] == m);
      }
    }
  }
  SUBCASE("midpoint of 0 and 2 is 1") {
    DemGrid g = DemGrid::filled(4, 4, 1.0);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) g.elevations[g.index(r, c)] = float(2 * c);
    const MapCoord a = g.center(1, 1), b = g.center(1, 2);
    const MapCoord mid[] = {{(a.east + b.east) / 2, a.north}};
    CHECK(std::abs(interp_linear(g, mid).values[0] - 3.0) < 1e-12);
    g.elevations[g.index(1, 1)] = 0;
    g.elevations[g.index(1, 2)] = 2;
    g.elevations[g.index(2, 1)] = 0;
    g.elevations[g.index(2, 2)] = 2;
    const MapCoord between[] = {{(a.east + b.east) / 2, a.north}};
    CHECK(std::abs(interp_linear(g, between).values[0] - 1.0) < 1e-12);
  }
  SUBCASE("planes are reproduced exactly, with and without voids") {
    Rng rng = make_rng(2);
    const double a = 0.31, b = -0.17, c = 12.5;
    DemGrid g = plane_grid(40, a, b, c);
    for (double voids : {0.0, 0.2}) {
      for (std::size_t i = 0; i < g.size(); ++i) g.nodata[i] = uniform01(rng) < voids;
      std::vector<MapCoord> t;
      for (int i = 0; i < 500; ++i) t.push_back(random_point(g, rng, 0.5));
      for (auto m : {InterpMethod::Linear, InterpMethod::Cubic}) {
        const auto r = interpolate(m, g, t);
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (r.used[i] == InterpMethod::Nearest) continue;
          REQUIRE(std::abs(r.values[i] - plane_at(t[i], a, b, c)) < 1e-4);
        }
        if (voids == 0.0 && m == InterpMethod::Linear) CHECK(r.fallback_count(m) == 0);
      }
    }
  }
  SUBCASE("a square gap is bridged exactly on a plane") {
    const double a = 0.5, b = 0.25, c = -3;
    DemGrid g = plane_grid(40, a, b, c);
    for (std::size_t r = 15; r < 25; ++r)
      for (std::size_t col = 15; col < 25; ++col) g.nodata[g.index(r, col)] = 1;
    std::vector<MapCoord> t;
    for (std::size_t r = 15; r < 25; ++r)
      for (std::size_t col = 15; col < 25; ++col) t.push_back(g.center(r, col));
    for (auto m : {InterpMethod::Linear, InterpMethod::Cubic}) {
      const auto r = interpolate(m, g, t);
      CHECK(r.fallback_count(m) == 0);
      for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(r.values[i] - plane_at(t[i], a, b, c)) < 1e-4);
    }
  }
  SUBCASE("cubic beats nearest on a smooth sinusoid") {
    DemGrid g = DemGrid::filled(64, 64, 1.0);
    auto f = [](MapCoord p) {
      return 10 * std::sin(p.east / 7.0) * std::cos(p.north / 9.0);
    };
    for (std::size_t i = 0; i < g.size(); ++i) g.elevations[i] = float(f(g.center(i)));
    Rng rng = make_rng(3);
    std::vector<MapCoord> t;
    std::vector<double> truth;
    for (int i = 0; i < 2000; ++i) {
      t.push_back(random_point(g, rng, 2));
      truth.push_back(f(t.back()));
    }
    const auto cubic = compute_metrics(interp_cubic(g, t).values, truth);
    const auto linear = compute_metrics(interp_linear(g, t).values, truth);
    const auto nearest = compute_metrics(interp_nearest(g, t).values, truth);
    CHECK(cubic.rmse < nearest.rmse);
    CHECK(linear.rmse < nearest.rmse);
  }
  SUBCASE("fallback chain reports the method used") {
    DemGrid g = DemGrid::filled(6, 6, 1.0, 4.0f);
    std::fill(g.nodata.begin(), g.nodata.end(), 1);
    g.nodata[g.index(2, 2)] = 0;
    g.nodata[g.index(2, 3)] = 0;
    const MapCoord p = g.center(2, 2), q = g.center(2, 3);
    const MapCoord t[] = {{(p.east + q.east) / 2, p.north}, g.center(4, 4)};
    const auto lin = interp_linear(g, t);
    // on the row through two observed pixels the vertical weight is zero
    CHECK(lin.used[0] == InterpMethod::Linear);
    CHECK(lin.used[1] == InterpMethod::Nearest);
    CHECK(lin.fallback_count(InterpMethod::Linear) == 1);
    const auto cub = interp_cubic(g, t);
    CHECK(cub.used[1] == InterpMethod::Nearest);
    CHECK(cub.values[1] == 4.0);
  }
  SUBCASE("parallel equals serial") {
    Rng rng = make_rng(4);
    DemGrid g = DemGrid::filled(50, 50, 5.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.elevations[i] = float(uniform(rng, 0, 50));
      g.nodata[i] = uniform01(rng) < 0.3;
    }
    std::vector<MapCoord> t;
    for (int i = 0; i < 3000; ++i) t.push_back(random_point(g, rng));
    for (auto m : {InterpMethod::Nearest, InterpMethod::Linear, InterpMethod::Cubic}) {
      const auto a = interpolate(m, g, t), b = reference::interpolate(m, g, t);
      CHECK(a.values == b.values);
      CHECK(a.used == b.used);
    }
  }
}

TEST_CASE("metrics") {
  SUBCASE("examples") {
    const std::vector<double> truth{0, 0, 0, 0};
    const auto a = compute_metrics(std::vector<double>{1, -1, 1, -1}, truth);
    CHECK(a.mae == 1);
    CHECK(a.rmse == 1);
    CHECK(!a.nll.has_value());
    CHECK(a.n_points == 4);
    const auto b = compute_metrics(std::vector<double>{0, 2}, std::vector<double>{0, 0});
    CHECK(b.mae == 1);
    CHECK(b.rmse == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("probabilistic") {
    const std::vector<double> truth{1, 2, 3};
    std::vector<PredictiveGaussian> exact{{1, 1e-3}, {2, 1e-3}, {3, 1e-3}};
    const auto e = compute_metrics(exact, truth);
    CHECK(e.mae == 0);
    CHECK(e.rmse == 0);
    std::vector<PredictiveGaussian> off{{2, 7}, {3, 0.5}, {4, 2}};
    const auto o = compute_metrics(off, truth);
    CHECK(o.mae == 1);
    CHECK(o.rmse == 1);
    std::vector<PredictiveGaussian> unit{{1, 1}};
    CHECK(*compute_metrics(unit, std::vector<double>{1}).nll ==
          doctest::Approx(0.5 * std::log(2 * std::numbers::pi)));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{1}, std::vector<double>{1, 2}),
                    DimensionError);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{}, std::vector<double>{}),
                    ContractError);
    std::vector<PredictiveGaussian> bad{{0, 0}};
    CHECK_THROWS_AS(compute_metrics(bad, std::vector<double>{0}), DomainError);
  }
  SUBCASE("long double oracle, permutation invariance, rmse >= mae") {
    Rng rng = make_rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + uniform_index(rng, 5000);
      std::vector<PredictiveGaussian> p(n);
      std::vector<double> y(n);
      long double abs = 0, sq = 0, nll = 0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = {uniform(rng, -100, 100), uniform(rng, 0.01, 30)};
        y[i] = uniform(rng, -100, 100);
        const long double e = (long double)y[i] - p[i].mu;
        abs += std::fabs(e);
        sq += e * e;
        const long double z = e / p[i].sigma;
        nll += 0.5L * std::log(2 * std::numbers::pi_v<long double>) +
               std::log((long double)p[i].sigma) + 0.5L * z * z;
      }
      const auto m = compute_metrics(p, y);
      CHECK(std::abs(m.mae - double(abs / n)) < 1e-9);
      CHECK(std::abs(m.rmse - double(std::sqrt(sq / n))) < 1e-9);
      CHECK(std::abs(*m.nll - double(nll / n)) < 1e-9);
      CHECK(m.rmse >= m.mae);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<PredictiveGaussian> pp(n);
      std::vector<double> yp(n);
      for (std::size_t i = 0; i < n; ++i) {
        pp[i] = p[perm[i]];
        yp[i] = y[perm[i]];
      }
      const auto mp = compute_metrics(pp, yp);
      CHECK(std::abs(mp.mae - m.mae) < 1e-9);
      CHECK(std::abs(mp.rmse - m.rmse) < 1e-9);
      CHECK(std::abs(*mp.nll - *m.nll) < 1e-9);
    }
  }
  SUBCASE("rmse never drops below mae on constant errors") {
    std::vector<double> est(1000, 0.1), truth(1000, 0.0);
    const auto m = compute_metrics(est, truth);
    CHECK(m.rmse >= m.mae);
  }
  SUBCASE("constant gaussian") {
    const std::vector<double> y{1, 3};
    const auto m = constant_gaussian_metrics(2, 1, y);
    CHECK(m.mae == 1);
    CHECK(*m.nll == doctest::Approx(0.5 * std::log(2 * std::numbers::pi) + 0.5));
  }
}

TEST_CASE("ablation value handling") {
  CHECK(parse_ablation_axis("alpha") == AblationAxis::Alpha);
  CHECK_THROWS_AS(parse_ablation_axis("lr"), ContractError);
  const auto alpha = default_ablation_values(AblationAxis::Alpha);
  CHECK(std::isinf(alpha.front()));
  CHECK(alpha.back() == 0);
  CHECK(format_axis_value(AblationAxis::Alpha, kInfiniteAlpha) == "inf");
  CHECK(format_axis_value(AblationAxis::Alpha, 0) == "0");
  CHECK(default_ablation_values(AblationAxis::K) == std::vector<double>{50, 100, 200, 500});
  CHECK(default_ablation_values(AblationAxis::Dim) ==
        std::vector<double>{128, 256, 512, 768, 1024});
  const auto parsed = parse_ablation_values(AblationAxis::Alpha, "inf,0.4,0");
  CHECK(parsed.size() == 3);
  CHECK(std::isinf(parsed[0]));
  CHECK_THROWS_AS(parse_ablation_values(AblationAxis::K, "inf"), ContractError);
  CHECK_THROWS_AS(parse_ablation_values(AblationAxis::K, "0"), ContractError);
  CHECK_THROWS_AS(parse_ablation_values(AblationAxis::K, "abc"), ContractError);
}
