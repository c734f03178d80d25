#pragma once

#include <cstddef>
#include <optional>

#include "hullwalk/stats.hpp"
#include "hullwalk/walk.hpp"

namespace hullwalk {

struct TheoryQuantities {
  double mu = 0.0;
  std::optional<double> sigma_sq;  // empty for zero drift
  double ss_bound_coeff = 0.0;
  bool degenerate = false;
};

// A drift below this fraction of sqrt(E||Z||^2) counts as zero.
inline constexpr double kZeroDriftTolerance = 1e-14;

bool has_zero_drift(const IncrementModel& model);

// lim Var[L_n]/n = 4 E[((Z - EZ) . EZ)^2] / ||EZ||^2. Closed form for the
// parametric laws, exact summation over atoms for finite support. Throws
// Error("sigma_squared undefined for zero drift").
double sigma_squared(const IncrementModel& model);

// (pi^2/2) (E||Z||^2 - ||EZ||^2), the coefficient of n in the variance
// upper bound.
double snyder_steele_coefficient(const IncrementModel& model);

TheoryQuantities theory_quantities(const IncrementModel& model);

// Monte Carlo estimate of 2 sum_{i<=n} E||S_i|| / i. Replicate r uses
// stream seed.stream_id + r; all n terms come from the same paths.
SummaryStats swb_expected_perimeter(const IncrementModel& model, std::size_t n, std::size_t reps, SeedSpec seed);

// The same sum evaluated exactly for a discrete law by enumerating S_i.
// Throws when k^n exceeds max_states.
double swb_expected_perimeter_exact(const IncrementModel& model, std::size_t n, std::size_t max_states = 1'000'000);

// Rotates v by the angle that carries the model mean onto the positive y
// axis. The identity for a zero-drift model.
Vec2 to_canonical_orientation(Vec2 v, const IncrementModel& model);

// E[Z . e_theta] in canonical orientation, i.e. mu sin(theta).
double drift_projection(const IncrementModel& model, double theta);

// Y = 2 (z - EZ) . EZ / ||EZ||. Throws for zero drift.
double y_increment(Vec2 z, const IncrementModel& model);

double normal_cdf(double x);

}  // namespace hullwalk
