#include <doctest.h>

#include <cmath>
#include <vector>

#include "hullwalk/error.hpp"
#include "hullwalk/montecarlo.hpp"
#include "hullwalk/theory.hpp"

using namespace hullwalk;

namespace {

// Maclaurin series, good to ~1e-15 for |x| < 3.
double erf_series(double x) {
  double term = x, sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= -x * x / k;
    sum += term / (2 * k + 1);
  }
  return 2.0 / std::sqrt(kPi) * sum;
}

IncrementModel random_atoms(std::uint64_t seed, std::size_t k) {
  Rng rng(SeedSpec{seed, 99});
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    const double w = 0.1 + rng.next_uniform();
    atoms.push_back({{4 * rng.next_uniform() - 2, 4 * rng.next_uniform() - 1}, w});
    total += w;
  }
  double used = 0.0;
  for (std::size_t a = 0; a + 1 < k; ++a) used += atoms[a].probability /= total;
  atoms.back().probability = 1.0 - used;
  return IncrementModel::finite_support(atoms);
}

// 4 m^T C m / |m|^2 from the covariance matrix.
double sigma_sq_from_covariance(const std::vector<Atom>& atoms) {
  Vec2 m;
  for (const Atom& a : atoms) m += a.probability * a.value;
  double cxx = 0, cxy = 0, cyy = 0;
  for (const Atom& a : atoms) {
    cxx += a.probability * a.value.x * a.value.x;
    cxy += a.probability * a.value.x * a.value.y;
    cyy += a.probability * a.value.y * a.value.y;
  }
  cxx -= m.x * m.x;
  cxy -= m.x * m.y;
  cyy -= m.y * m.y;
  return 4.0 * (m.x * m.x * cxx + 2 * m.x * m.y * cxy + m.y * m.y * cyy) / dot(m, m);
}

}  // namespace

TEST_CASE("sigma squared for parametric laws") {
  CHECK(sigma_squared(IncrementModel::circle_drift(0.2)) == doctest::Approx(2.0));
  CHECK(sigma_squared(IncrementModel::circle_drift(1.7)) == doctest::Approx(2.0));
  CHECK(sigma_squared(IncrementModel::two_point_degenerate()) == doctest::Approx(0.0));
  CHECK(sigma_squared(IncrementModel::gaussian_drift({1, 0}, 0.5, 3.0)) == doctest::Approx(1.0));
  CHECK(sigma_squared(IncrementModel::gaussian_drift({-2, 2}, 1.5, 0.1)) == doctest::Approx(9.0));
  CHECK_THROWS_WITH_AS(sigma_squared(IncrementModel::circle_drift(0.0)), "sigma_squared undefined for zero drift",
                       Error);
}

TEST_CASE("sigma squared for finite support matches covariance form") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto model = random_atoms(s, 2 + s % 5);
    CHECK(sigma_squared(model) == doctest::Approx(sigma_sq_from_covariance(*model.atoms())).epsilon(1e-12));
  }
  // Two atoms on a line orthogonal to the mean.
  const auto flat = IncrementModel::finite_support({{{1, 1}, 0.5}, {{1, -1}, 0.5}});
  CHECK(sigma_squared(flat) == doctest::Approx(0.0));
  CHECK(theory_quantities(flat).degenerate);
}

TEST_CASE("snyder steele coefficient") {
  const double half_pi_sq = kPi * kPi / 2.0;
  CHECK(snyder_steele_coefficient(IncrementModel::two_point_degenerate()) == doctest::Approx(half_pi_sq));
  CHECK(snyder_steele_coefficient(IncrementModel::circle_drift(0.2)) == doctest::Approx(half_pi_sq));
  CHECK(snyder_steele_coefficient(IncrementModel::circle_drift(0.0)) == doctest::Approx(half_pi_sq));
  CHECK(snyder_steele_coefficient(IncrementModel::point_mass({3, 4})) == doctest::Approx(0.0));
  CHECK(snyder_steele_coefficient(IncrementModel::gaussian_drift({1, 1}, 2.0, 0.5)) ==
        doctest::Approx(half_pi_sq * 4.25));
}

TEST_CASE("limiting variance never exceeds the upper bound coefficient") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto model = random_atoms(1000 + s, 2 + s % 6);
    if (has_zero_drift(model)) continue;
    CHECK(sigma_squared(model) <= snyder_steele_coefficient(model) * (8.0 / (kPi * kPi)) * (1 + 1e-12));
  }
  CHECK(sigma_squared(IncrementModel::circle_drift(0.4)) <=
        snyder_steele_coefficient(IncrementModel::circle_drift(0.4)) * 8.0 / (kPi * kPi));
}

TEST_CASE("theory quantities are rotation invariant") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto model = random_atoms(2000 + s, 3);
    std::vector<Atom> turned = *model.atoms();
    for (Atom& a : turned) a.value = rotate(a.value, 0.3 + s);
    const auto other = IncrementModel::finite_support(turned);
    CHECK(sigma_squared(other) == doctest::Approx(sigma_squared(model)).epsilon(1e-10));
    CHECK(snyder_steele_coefficient(other) == doctest::Approx(snyder_steele_coefficient(model)).epsilon(1e-10));
    CHECK(other.mu() == doctest::Approx(model.mu()).epsilon(1e-12));
  }
}

TEST_CASE("theory_quantities fields") {
  const auto t = theory_quantities(IncrementModel::circle_drift(0.2));
  CHECK(t.mu == doctest::Approx(0.2));
  REQUIRE(t.sigma_sq);
  CHECK(*t.sigma_sq == doctest::Approx(2.0));
  CHECK_FALSE(t.degenerate);

  const auto z = theory_quantities(IncrementModel::circle_drift(0.0));
  CHECK_FALSE(z.sigma_sq);
  CHECK_FALSE(z.degenerate);
  CHECK(has_zero_drift(IncrementModel::circle_drift(0.0)));
  CHECK(has_zero_drift(IncrementModel::circle_drift(1e-16)));
  CHECK_FALSE(has_zero_drift(IncrementModel::circle_drift(1e-6)));

  const auto d = theory_quantities(IncrementModel::two_point_degenerate());
  REQUIRE(d.sigma_sq);
  CHECK(*d.sigma_sq == doctest::Approx(0.0));
  CHECK(d.degenerate);
}

TEST_CASE("exact expected perimeter formula") {
  const auto two = IncrementModel::two_point_degenerate();
  CHECK(swb_expected_perimeter_exact(two, 2) == doctest::Approx(1.0 + 3.0 * std::sqrt(2.0)));
  CHECK(swb_expected_perimeter_exact(IncrementModel::point_mass({1, 0}), 7) == doctest::Approx(14.0));
  for (std::size_t n = 1; n <= 6; ++n)
    CHECK(swb_expected_perimeter_exact(two, n) == doctest::Approx(exact_decomposition(two, n).mean_exact).epsilon(1e-12));
  const auto three = IncrementModel::finite_support({{{1, 0}, 0.5}, {{-0.5, 1}, 0.25}, {{0, -2}, 0.25}});
  for (std::size_t n = 1; n <= 5; ++n)
    CHECK(swb_expected_perimeter_exact(three, n) ==
          doctest::Approx(exact_decomposition(three, n).mean_exact).epsilon(1e-12));
  CHECK_THROWS_AS(swb_expected_perimeter_exact(two, 30), Error);
  CHECK_THROWS_AS(swb_expected_perimeter_exact(IncrementModel::circle_drift(0.2), 3), Error);
}

TEST_CASE("monte carlo expected perimeter formula") {
  const auto pm = swb_expected_perimeter(IncrementModel::point_mass({0, 2}), 10, 5, SeedSpec{1, 0});
  CHECK(pm.mean == doctest::Approx(40.0));
  CHECK(pm.variance == doctest::Approx(0.0));

  const auto two = IncrementModel::two_point_degenerate();
  const auto est = swb_expected_perimeter(two, 8, 20000, SeedSpec{5, 0});
  CHECK(std::abs(est.mean - swb_expected_perimeter_exact(two, 8)) < 4 * est.standard_error_of_mean);
}

TEST_CASE("canonical orientation and drift projection") {
  const auto c = IncrementModel::circle_drift(0.2);
  CHECK(drift_projection(c, kPi / 2) == doctest::Approx(0.2));
  CHECK(drift_projection(c, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(drift_projection(c, kPi / 6) == doctest::Approx(0.1));
  const Vec2 up = to_canonical_orientation({0.2, 0.0}, c);
  CHECK(up.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(up.y == doctest::Approx(0.2));

  const auto g = IncrementModel::gaussian_drift({-3, -4}, 1, 1);
  const Vec2 gm = to_canonical_orientation(g.mean(), g);
  CHECK(gm.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(gm.y == doctest::Approx(5.0));
  CHECK(drift_projection(g, 1.0) == doctest::Approx(5.0 * std::sin(1.0)));

  const auto zero = IncrementModel::circle_drift(0.0);
  CHECK(to_canonical_orientation({1.5, -2}, zero) == Vec2{1.5, -2});
  CHECK(drift_projection(zero, 1.0) == 0.0);
}

TEST_CASE("y increment examples and moments") {
  const auto c = IncrementModel::circle_drift(0.2);
  CHECK(y_increment({1.2, 0.0}, c) == doctest::Approx(2.0));
  CHECK(y_increment({0.2, 1.0}, c) == doctest::Approx(0.0));
  CHECK(y_increment({-0.8, 0.0}, c) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(y_increment({1, 0}, IncrementModel::circle_drift(0.0)), Error);

  const IncrementModel models[] = {c, IncrementModel::gaussian_drift({0.5, 0.5}, 1.3, 0.4),
                                   IncrementModel::finite_support({{{2, 1}, 0.3}, {{-1, 1}, 0.7}})};
  const std::size_t count = 100000;
  for (const auto& model : models) {
    std::vector<double> ys;
    for (std::uint64_t k = 0; k < count; ++k) ys.push_back(y_increment(sample_increment(model, SeedSpec{8, 1}, k), model));
    const auto s = summarize(ys);
    CHECK(std::abs(s.mean) < 4 * s.standard_error_of_mean);
    CHECK(std::abs(s.variance - sigma_squared(model)) < 4 * s.standard_error_of_variance);
  }
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.5 * (1 + erf_series(1.96 / std::sqrt(2.0)))).epsilon(1e-13));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750).epsilon(1e-4));
  for (double x : {0.1, 0.7, 1.3, 2.5, 4.0}) CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0));
  for (double x : {-2.0, -0.5, 0.3, 1.1, 2.9})
    CHECK(normal_cdf(x) == doctest::Approx(0.5 * (1 + erf_series(x / std::sqrt(2.0)))).epsilon(1e-12));
}
