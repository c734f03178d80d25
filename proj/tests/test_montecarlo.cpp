#include <doctest.h>

#include <cmath>
#include <vector>

#include "hullwalk/error.hpp"
#include "hullwalk/montecarlo.hpp"

using namespace hullwalk;

namespace {

McConfig small_config(IncrementModel model, std::size_t reps = 50) {
  McConfig c;
  c.model = std::move(model);
  c.reps = reps;
  c.master_seed = 17;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  McConfig c;
  CHECK_NOTHROW(c.validate());
  c.gamma = 0.7;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("(0, 1/2)"), ConfigError);
  c.gamma = 0.1;
  c.delta = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.delta = 0.3;
  c.n_values = {10, 10};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.n_values = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.n_values = {10};
  c.reps = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("parallel_for covers every slot and rethrows") {
  std::vector<int> slots(1000, 0);
  parallel_for(slots.size(), 4, [&](std::size_t r) { slots[r] += 1; });
  for (int v : slots) CHECK(v == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t r) { if (r == 5) throw Error("boom"); }), Error);
}

TEST_CASE("perimeter samples") {
  const auto pm = perimeter_samples(small_config(IncrementModel::point_mass({1, 0}), 4), 5);
  for (double v : pm) CHECK(v == doctest::Approx(10.0));

  const auto two = perimeter_samples(small_config(IncrementModel::two_point_degenerate(), 400), 2);
  for (double v : two) {
    const bool ok = std::abs(v - 4 * std::sqrt(2.0)) < 1e-12 || std::abs(v - (2 + 2 * std::sqrt(2.0))) < 1e-12;
    CHECK(ok);
  }

  McConfig c = small_config(IncrementModel::circle_drift(0.3), 64);
  const auto a = perimeter_samples(c, 200);
  c.threads = 4;
  const auto b = perimeter_samples(c, 200);
  CHECK(a == b);
  for (std::size_t r = 0; r < a.size(); ++r)
    CHECK(a[r] == convex_hull(generate_walk(c.model, 200, c.seed(r)).path.points()).perimeter);
}

TEST_CASE("variance sweep equals per-n samples") {
  McConfig c = small_config(IncrementModel::gaussian_drift({0.4, 0.1}, 1.0, 0.7), 40);
  c.n_values = {5, 50, 333};
  const auto sweep = variance_sweep(c);
  REQUIRE(sweep.points.size() == 3);
  for (const auto& pt : sweep.points) {
    const auto direct = perimeter_samples(c, pt.n);
    const auto s = summarize(direct);
    CHECK(pt.perimeter.mean == doctest::Approx(s.mean).epsilon(1e-12));
    CHECK(pt.perimeter.variance == doctest::Approx(s.variance).epsilon(1e-9));
    CHECK(pt.var_over_n == doctest::Approx(s.variance / pt.n).epsilon(1e-9));
  }
  CHECK_FALSE(sweep.log_fit);
  // Through-origin least squares, recomputed here.
  double sxy = 0, sxx = 0;
  for (const auto& pt : sweep.points) {
    sxy += pt.n * pt.perimeter.variance;
    sxx += static_cast<double>(pt.n) * pt.n;
  }
  CHECK(sweep.slope == doctest::Approx(sxy / sxx));

  McConfig d = small_config(IncrementModel::two_point_degenerate(), 40);
  d.n_values = {10, 100};
  CHECK(variance_sweep(d).log_fit);
}

TEST_CASE("exact decomposition examples") {
  const auto two = exact_decomposition(IncrementModel::two_point_degenerate(), 2);
  CHECK(two.paths == 4);
  CHECK(two.mean_exact == doctest::Approx(1 + 3 * std::sqrt(2.0)));
  CHECK(two.var_exact == doctest::Approx(3 - 2 * std::sqrt(2.0)));
  CHECK(two.sum_ed2 == doctest::Approx(two.var_exact).epsilon(1e-12));
  CHECK(two.satisfies(1e-10));

  const auto pm = exact_decomposition(IncrementModel::point_mass({0, 1}), 4);
  CHECK(pm.var_exact == doctest::Approx(0.0));
  CHECK(pm.sum_ed2 == doctest::Approx(0.0));
  CHECK(pm.mean_exact == doctest::Approx(8.0));
  CHECK(pm.satisfies(1e-10));

  // Two atoms, n = 3, enumerated by hand below.
  const std::vector<Atom> atoms{{{1, 0}, 0.3}, {{0, 1}, 0.7}};
  const auto rec = exact_decomposition(IncrementModel::finite_support(atoms), 3);
  double mean = 0, sq = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const Vec2 s1 = atoms[a].value, s2 = s1 + atoms[b].value, s3 = s2 + atoms[c].value;
        const double l = convex_hull(std::vector<Vec2>{{0, 0}, s1, s2, s3}).perimeter;
        const double p = atoms[a].probability * atoms[b].probability * atoms[c].probability;
        mean += p * l;
        sq += p * l * l;
      }
  CHECK(rec.mean_exact == doctest::Approx(mean).epsilon(1e-13));
  CHECK(rec.var_exact == doctest::Approx(sq - mean * mean).epsilon(1e-10));
  CHECK(rec.satisfies(1e-10));
  CHECK(rec.expected_d_squared.size() == 3);

  CHECK_THROWS_WITH_AS(exact_decomposition(IncrementModel::two_point_degenerate(), 21),
                       doctest::Contains("state space too large"), Error);
  CHECK_THROWS_AS(exact_decomposition(IncrementModel::circle_drift(0.1), 3), Error);
}

TEST_CASE("exact decomposition with a zero-weight atom") {
  const auto rec =
      exact_decomposition(IncrementModel::finite_support({{{1, 0}, 0.5}, {{0, 1}, 0.5}, {{5, 5}, 0.0}}), 4);
  const auto ref = exact_decomposition(IncrementModel::finite_support({{{1, 0}, 0.5}, {{0, 1}, 0.5}}), 4);
  CHECK(rec.var_exact == doctest::Approx(ref.var_exact).epsilon(1e-12));
  CHECK(rec.satisfies(1e-10));
}

TEST_CASE("exact variance agrees with simulation") {
  const auto model = IncrementModel::finite_support({{{1, 0.5}, 0.4}, {{-0.5, 1}, 0.35}, {{0.2, -1}, 0.25}});
  const auto rec = exact_decomposition(model, 6);
  const auto samples = perimeter_samples(small_config(model, 40000), 6);
  const auto s = summarize(samples);
  CHECK(std::abs(s.mean - rec.mean_exact) < 4 * s.standard_error_of_mean);
  CHECK(std::abs(s.variance - rec.var_exact) < 4 * s.standard_error_of_variance);
}

TEST_CASE("clt samples") {
  CHECK_THROWS_WITH_AS(clt_samples(small_config(IncrementModel::two_point_degenerate()), 50),
                       "CLT undefined in degenerate case", Error);
  CHECK_THROWS_AS(clt_samples(small_config(IncrementModel::circle_drift(0.0)), 50), Error);

  const auto res = clt_samples(small_config(IncrementModel::circle_drift(0.5), 200), 100);
  CHECK(res.standardized.size() == 200);
  const auto s = summarize(res.standardized);
  CHECK(std::abs(s.mean) < 0.3);
  CHECK(s.variance == doctest::Approx(1.0).epsilon(0.1));
  CHECK(res.critical_value == doctest::Approx(ks_critical_value(200)));
}

TEST_CASE("residual vanishes for a point mass") {
  const auto r = theorem0_residual(small_config(IncrementModel::point_mass({0, 1}), 10), 20);
  CHECK(r.mean == doctest::Approx(0.0).epsilon(1e-20));
  CHECK_THROWS_AS(theorem0_residual(small_config(IncrementModel::circle_drift(0.0)), 20), Error);
}

TEST_CASE("panel indices") {
  CHECK(panel_indices(100, 9) == std::vector<std::size_t>{1, 13, 26, 38, 51, 63, 75, 88, 100});
  CHECK(panel_indices(3, 9) == std::vector<std::size_t>{1, 2, 3});
  CHECK(panel_indices(10, 1) == std::vector<std::size_t>{5});
}

TEST_CASE("event probability matches brute force") {
  McConfig c = small_config(IncrementModel::circle_drift(0.6), 120);
  c.grid_size = 64;
  c.panel_size = 5;
  for (std::size_t n : {3u, 10u, 37u}) {
    const auto diag = event_probability(c, n);
    const AngleGrid grid(c.grid_size);
    const double dn = static_cast<double>(n);
    // Drift is along +x, so canonical angles are raw angles minus pi/2.
    auto event = [&](const WalkPath& raw) {
      std::vector<Vec2> turned;
      for (const Vec2& q : raw.points()) turned.push_back({-q.y, q.x});
      const WalkPath p(turned);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.theta(k);
        if (t < c.delta || t > kPi - c.delta) continue;
        const auto e = support_extrema(p, t);
        if (!(static_cast<double>(e.argmin) < c.gamma * dn)) return false;
        if (!(static_cast<double>(e.argmax) > (1 - c.gamma) * dn)) return false;
      }
      return true;
    };
    std::vector<double> freq(diag.indices.size(), 0.0);
    for (std::size_t r = 0; r < c.reps; ++r) {
      const Walk w = generate_walk(c.model, n, c.seed(r));
      const bool ok = event(w.path);
      for (std::size_t t = 0; t < diag.indices.size(); ++t) {
        const std::size_t i = diag.indices[t];
        const ResampleView v{w.increments, i, sample_replacement(c.model, c.seed(r), i)};
        if (ok && event(resample_path(v))) freq[t] += 1.0 / c.reps;
      }
    }
    for (std::size_t t = 0; t < freq.size(); ++t) CHECK(diag.frequencies[t] == doctest::Approx(freq[t]));
    CHECK(diag.bound_violations == 0);
    CHECK(diag.bound_checks == c.reps * diag.indices.size() * grid.size());
  }
}

TEST_CASE("event probability edge cases") {
  McConfig c = small_config(IncrementModel::point_mass({0, 1}), 5);
  const auto straight = event_probability(c, 20);
  for (double f : straight.frequencies) CHECK(f == 1.0);
  CHECK(straight.min_estimate == 1.0);

  // With gamma near 1/2 and n = 2 the low block holds only the origin and
  // the high block only S_2, so a backwards step breaks the event.
  McConfig d = small_config(IncrementModel::circle_drift(0.1), 400);
  d.gamma = 0.499;
  const auto tiny = event_probability(d, 2);
  CHECK(tiny.min_estimate < 1.0);
  CHECK_THROWS_AS(event_probability(small_config(IncrementModel::circle_drift(0.0)), 10), Error);
}

TEST_CASE("cauchy and swb checks") {
  McConfig c = small_config(IncrementModel::circle_drift(0.36), 30);
  c.grid_size = 4096;
  const auto cc = cauchy_check(c, 120);
  CHECK(cc.max_relative_error < 1e-3);
  CHECK(cc.mean_relative_error <= cc.max_relative_error);

  McConfig s = small_config(IncrementModel::point_mass({1, 1}), 5);
  const auto sw = swb_check(s, 10);
  CHECK(sw.direct.mean == doctest::Approx(20 * std::sqrt(2.0)));
  CHECK(sw.swb.mean == doctest::Approx(20 * std::sqrt(2.0)));
}
