#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hullwalk/stats.hpp"
#include "hullwalk/theory.hpp"
#include "hullwalk/walk.hpp"

namespace hullwalk {

struct McConfig {
  IncrementModel model = IncrementModel::circle_drift(0.25);
  std::vector<std::size_t> n_values{100};
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  std::size_t grid_size = 1024;
  double delta = 0.3;  // angle window [delta, pi - delta] for the extrema event
  double gamma = 0.1;  // index window fraction for the extrema event
  std::size_t panel_size = 9;  // resampled indices per n in event_probability
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  // Throws ConfigError naming the offending field.
  void validate() const;
  SeedSpec seed(std::size_t replicate) const { return SeedSpec{master_seed, replicate}; }
};

// Runs body(r) for r in [0, count) on up to `threads` workers. Callers write
// results into slots indexed by r, so output never depends on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

// L_n for replicates 0..reps-1; replicate r uses stream r.
std::vector<double> perimeter_samples(const McConfig& config, std::size_t n);

struct SweepPoint {
  std::size_t n = 0;
  SummaryStats perimeter;  // of L_n across replicates
  double var_over_n = 0.0;
  double var_over_n_se = 0.0;
};

struct VarianceSweep {
  std::vector<SweepPoint> points;
  double slope = 0.0;  // least squares Var[L_n] = slope * n
  TheoryQuantities theory;
  std::optional<LineFit> log_fit;  // Var[L_n] ~ a + b log n, degenerate models only
};

// Every replicate walks to max(n_values) once and reads L_n off each prefix,
// so the samples at each n equal perimeter_samples(config, n).
VarianceSweep variance_sweep(const McConfig& config);

struct CltResult {
  std::vector<double> standardized;  // (L - leave-one-out mean) / sample sd
  double ks_distance = 0.0;
  std::vector<double> standardized_theory;  // (L - leave-one-out mean) / sqrt(sigma^2 n)
  double ks_distance_theory = 0.0;
  double critical_value = 0.0;  // 1% asymptotic KS critical value
};

// Throws Error("CLT undefined in degenerate case") when sigma^2 = 0 and
// Error for zero drift.
CltResult clt_samples(const McConfig& config, std::size_t n);

// r = n^{-1/2} (L_n - leave-one-out mean - sum_i Y_i) per replicate;
// returns statistics of r^2. Throws for zero drift.
SummaryStats theorem0_residual(const McConfig& config, std::size_t n);

struct DecompositionRecord {
  std::size_t n = 0;
  std::size_t paths = 0;
  double mean_exact = 0.0;  // E[L_n]
  double var_exact = 0.0;   // Var[L_n]
  std::vector<double> expected_d_squared;  // E[D_{n,i}^2], i = 1..n
  double sum_ed2 = 0.0;
  double max_pathwise_error = 0.0;    // max over paths |L - EL - sum_i D_i|
  double max_martingale_error = 0.0;  // max |E[D_i | F_{i-1}]|
  double max_increment_form_error = 0.0;  // |D_i - (E[L|F_i] - E[L|F_{i-1}])|

  double variance_relative_error() const;
  double pathwise_relative_error() const;
  bool satisfies(double relative_tolerance) const;
};

// Full enumeration over k^n increment sequences. D_{n,i} is computed from
// its definition by averaging L_n - L_n^(i) over Z_i' and the suffix.
DecompositionRecord exact_decomposition(const IncrementModel& model, std::size_t n,
                                        std::size_t max_states = 1'000'000);

struct EventDiagnostic {
  std::size_t n = 0;
  double delta = 0.0;
  double gamma = 0.0;
  std::vector<std::size_t> indices;   // resampled step i, 1-based
  std::vector<double> frequencies;    // estimate of P[E_{n,i}] per index
  double min_estimate = 0.0;
  std::size_t bound_checks = 0;       // grid points checked against 2||Z_i|| + 2||Z_i'||
  std::size_t bound_violations = 0;
};

std::vector<std::size_t> panel_indices(std::size_t n, std::size_t panel_size);

// Estimates P[E_{n,i}(delta, gamma)]: on both the original and the
// resampled path, every directional argmin lies below gamma*n and every
// argmax above (1-gamma)*n for grid angles in [delta, pi - delta], measured
// in canonical orientation (drift along +y). Also
// checks the pointwise range-difference bound on the whole grid.
EventDiagnostic event_probability(const McConfig& config, std::size_t n);

struct CauchyCheck {
  std::size_t n = 0;
  double max_relative_error = 0.0;
  double mean_relative_error = 0.0;
};

// Quadrature perimeter vs hull perimeter over reps realizations.
CauchyCheck cauchy_check(const McConfig& config, std::size_t n);

struct SwbCheck {
  std::size_t n = 0;
  SummaryStats direct;  // hull perimeters, streams 0..reps-1
  SummaryStats swb;     // 2 sum ||S_i|| / i, streams reps..2 reps-1
  double combined_se = 0.0;
  double z_score = 0.0;
};

SwbCheck swb_check(const McConfig& config, std::size_t n);

}  // namespace hullwalk
