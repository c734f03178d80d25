#include "hullwalk/theory.hpp"

#include <cmath>
#include <variant>
#include <vector>

#include "hullwalk/error.hpp"

namespace hullwalk {

namespace {

std::size_t checked_state_count(std::size_t atoms, std::size_t n, std::size_t max_states) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (count > max_states / atoms) throw Error("state space too large: " + std::to_string(atoms) + "^" +
                                                std::to_string(n) + " exceeds " + std::to_string(max_states));
    count *= atoms;
  }
  return count;
}

}  // namespace

bool has_zero_drift(const IncrementModel& model) {
  return model.mu() <= kZeroDriftTolerance * std::sqrt(model.second_moment());
}

double sigma_squared(const IncrementModel& model) {
  if (has_zero_drift(model)) throw Error("sigma_squared undefined for zero drift");
  const auto& law = model.law();
  if (std::holds_alternative<CircleDrift>(law)) return 2.0;  // 4 E[cos^2 T]
  if (std::holds_alternative<TwoPointDegenerate>(law)) return 0.0;
  if (const auto* g = std::get_if<GaussianDrift>(&law)) return 4.0 * g->sdev_along * g->sdev_along;
  const Vec2 m = model.mean();
  double acc = 0.0;
  for (const Atom& a : std::get<FiniteSupport>(law).atoms) {
    const double c = dot(a.value - m, m);
    acc += a.probability * c * c;
  }
  return 4.0 * acc / dot(m, m);
}

double snyder_steele_coefficient(const IncrementModel& model) {
  const double centred = model.second_moment() - dot(model.mean(), model.mean());
  return 0.5 * kPi * kPi * std::max(centred, 0.0);
}

TheoryQuantities theory_quantities(const IncrementModel& model) {
  TheoryQuantities q;
  q.mu = model.mu();
  q.ss_bound_coeff = snyder_steele_coefficient(model);
  if (!has_zero_drift(model)) {
    q.sigma_sq = sigma_squared(model);
    // Exact zero for the closed forms; rounding scale for atom sums.
    q.degenerate = *q.sigma_sq <= 1e-12 * (model.second_moment() + 1e-300);
  }
  return q;
}

SummaryStats swb_expected_perimeter(const IncrementModel& model, std::size_t n, std::size_t reps, SeedSpec seed) {
  if (n < 1 || reps < 1) throw Error("swb_expected_perimeter needs n >= 1 and reps >= 1");
  std::vector<double> sums(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const Walk w = generate_walk(model, n, SeedSpec{seed.master_seed, seed.stream_id + r});
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) acc += norm(w.path[i]) / static_cast<double>(i);
    sums[r] = 2.0 * acc;
  }
  return summarize(sums);
}

double swb_expected_perimeter_exact(const IncrementModel& model, std::size_t n, std::size_t max_states) {
  const auto atoms = model.atoms();
  if (!atoms) throw Error("exact evaluation needs a discrete increment law");
  checked_state_count(atoms->size(), n, max_states);
  std::vector<Atom> states{{Vec2{}, 1.0}};
  double total = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Atom> next;
    next.reserve(states.size() * atoms->size());
    double expected_norm = 0.0;
    for (const Atom& s : states) {
      for (const Atom& a : *atoms) {
        next.push_back({s.value + a.value, s.probability * a.probability});
        expected_norm += next.back().probability * norm(next.back().value);
      }
    }
    total += expected_norm / static_cast<double>(i);
    states = std::move(next);
  }
  return 2.0 * total;
}

Vec2 to_canonical_orientation(Vec2 v, const IncrementModel& model) {
  if (has_zero_drift(model)) return v;
  const Vec2 m = model.mean();
  return rotate(v, 0.5 * kPi - std::atan2(m.y, m.x));
}

double drift_projection(const IncrementModel& model, double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw Error("theta must lie in [0, pi]");
  return dot(to_canonical_orientation(model.mean(), model), unit_vector(theta));
}

double y_increment(Vec2 z, const IncrementModel& model) {
  if (has_zero_drift(model)) throw Error("y_increment undefined for zero drift");
  const Vec2 m = model.mean();
  return 2.0 * dot(z - m, m) / norm(m);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace hullwalk
