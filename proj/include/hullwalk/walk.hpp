#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hullwalk/geometry.hpp"

namespace hullwalk {

// Z = (mu, 0) + (cos T, sin T), T uniform on [0, 2 pi).
struct CircleDrift {
  double mu = 0.0;
};

// Z = (1, 1) or (1, -1), each with probability 1/2.
struct TwoPointDegenerate {};

struct Atom {
  Vec2 value;
  double probability = 0.0;
};

struct FiniteSupport {
  std::vector<Atom> atoms;
};

// Gaussian with the given mean; independent components along the mean
// direction (sdev_along) and perpendicular to it (sdev_perp). For a zero
// mean the along axis is x.
struct GaussianDrift {
  Vec2 mean;
  double sdev_along = 1.0;
  double sdev_perp = 1.0;
};

enum class ModelKind { CircleDrift, TwoPointDegenerate, FiniteSupport, GaussianDrift };

class IncrementModel {
 public:
  using Law = std::variant<CircleDrift, TwoPointDegenerate, FiniteSupport, GaussianDrift>;

  static IncrementModel circle_drift(double mu);
  static IncrementModel two_point_degenerate();
  // Throws ConfigError when weights are negative or do not sum to 1 within 1e-12.
  static IncrementModel finite_support(std::vector<Atom> atoms);
  static IncrementModel point_mass(Vec2 value);
  static IncrementModel gaussian_drift(Vec2 mean, double sdev_along, double sdev_perp);

  ModelKind kind() const { return static_cast<ModelKind>(law_.index()); }
  const Law& law() const { return law_; }

  Vec2 mean() const { return mean_; }
  double mu() const { return norm(mean_); }
  // E ||Z||^2
  double second_moment() const { return second_moment_; }

  // Atoms of a discrete law (TwoPointDegenerate or FiniteSupport).
  std::optional<std::vector<Atom>> atoms() const;

  // Short identifier without commas, e.g. "circle_drift(mu=0.2)".
  std::string descriptor() const;

  // Maps uniforms u[0..3] in [0,1) to one increment.
  Vec2 transform(const double (&u)[4]) const;

 private:
  explicit IncrementModel(Law law);

  Law law_;
  Vec2 mean_;
  double second_moment_ = 0.0;
  std::vector<double> cumulative_;  // FiniteSupport only
};

// Identifies one replicate stream. For a fixed master seed, distinct stream
// ids give distinct generator keys.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  std::uint64_t key() const;
  // An independent family of streams keyed by `lane`, same stream id.
  SeedSpec derived(std::uint64_t lane) const;
};

std::uint64_t mix64(std::uint64_t x);

// Counter-based generator: the value at counter c is mix64(key + (c+1)*phi),
// i.e. SplitMix64 with random access. next_*() advance an internal counter.
class Rng {
 public:
  explicit Rng(SeedSpec seed) : key_(seed.key()) {}
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t at(std::uint64_t counter) const;
  double uniform_at(std::uint64_t counter) const { return static_cast<double>(at(counter) >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return at(counter_++); }
  double next_uniform() { return uniform_at(counter_++); }
  double next_normal();
  // Uniform integer in [lo, hi].
  std::uint64_t next_index(std::uint64_t lo, std::uint64_t hi);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Deterministic function of (model, seed, k); draw k is Z_{k+1}.
Vec2 sample_increment(const IncrementModel& model, SeedSpec seed, std::uint64_t k);

// Replacement Z_i' for resampling step i (1-based), drawn from a lane
// independent of the increments themselves.
Vec2 sample_replacement(const IncrementModel& model, SeedSpec seed, std::uint64_t i);

struct Walk {
  WalkPath path;
  std::vector<Vec2> increments;
};

Walk generate_walk(const IncrementModel& model, std::size_t steps, SeedSpec seed);

// The walk with the i-th increment (1-based) replaced.
struct ResampleView {
  std::span<const Vec2> increments;
  std::size_t index = 1;
  Vec2 replacement;

  Vec2 original() const { return increments[index - 1]; }
  // 2||Z_i|| + 2||Z_i'||, the pointwise bound on the range difference.
  double delta_bound() const { return 2.0 * norm(original()) + 2.0 * norm(replacement); }
};

WalkPath resample_path(const ResampleView& view);

// L_n - L_n^(i) from the two hull perimeters.
double perimeter_delta(const ResampleView& view);

// R_n(theta) - R_n^(i)(theta) at each grid node.
std::vector<double> delta_profile(const ResampleView& view, const AngleGrid& grid);

}  // namespace hullwalk
