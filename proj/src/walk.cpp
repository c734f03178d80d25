#include "hullwalk/walk.hpp"

#include <algorithm>
#include <cmath>

#include "hullwalk/error.hpp"
#include "hullwalk/format.hpp"

namespace hullwalk {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kReplacementLane = 0x5245534D504C45ULL;  // "RESMPLE"

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SeedSpec::key() const {
  // mix64 is a bijection, so the xor is injective in stream_id.
  return mix64(master_seed ^ 0x6A09E667F3BCC908ULL) ^ mix64(stream_id + kGolden);
}

SeedSpec SeedSpec::derived(std::uint64_t lane) const {
  return SeedSpec{mix64(master_seed ^ mix64(lane)), stream_id};
}

std::uint64_t Rng::at(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGolden); }

double Rng::next_normal() {
  const double u1 = 1.0 - next_uniform();  // (0, 1]
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t Rng::next_index(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next_u64();
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return lo + v % span;
}

IncrementModel::IncrementModel(Law law) : law_(std::move(law)) {
  std::visit(overloaded{
                 [&](const CircleDrift& c) {
                   mean_ = {c.mu, 0.0};
                   second_moment_ = c.mu * c.mu + 1.0;
                 },
                 [&](const TwoPointDegenerate&) {
                   mean_ = {1.0, 0.0};
                   second_moment_ = 2.0;
                 },
                 [&](const FiniteSupport& f) {
                   Vec2 m{};
                   double m2 = 0.0, acc = 0.0;
                   cumulative_.reserve(f.atoms.size());
                   for (const Atom& a : f.atoms) {
                     m += a.probability * a.value;
                     m2 += a.probability * dot(a.value, a.value);
                     acc += a.probability;
                     cumulative_.push_back(acc);
                   }
                   mean_ = m;
                   second_moment_ = m2;
                 },
                 [&](const GaussianDrift& g) {
                   mean_ = g.mean;
                   second_moment_ = dot(g.mean, g.mean) + g.sdev_along * g.sdev_along + g.sdev_perp * g.sdev_perp;
                 },
             },
             law_);
}

IncrementModel IncrementModel::circle_drift(double mu) {
  require_finite(mu, "model.mu");
  if (mu < 0.0) throw ConfigError("model.mu", "must be >= 0");
  return IncrementModel(CircleDrift{mu});
}

IncrementModel IncrementModel::two_point_degenerate() { return IncrementModel(TwoPointDegenerate{}); }

IncrementModel IncrementModel::finite_support(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("atom", "finite support model needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!is_finite(a.value)) throw ConfigError("atom", "atom coordinates must be finite");
    if (!(a.probability >= 0.0)) throw ConfigError("atom", "atom probabilities must be >= 0");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("atom", "atom probabilities sum to " + format_number(total) + ", expected 1");
  return IncrementModel(FiniteSupport{std::move(atoms)});
}

IncrementModel IncrementModel::point_mass(Vec2 value) { return finite_support({Atom{value, 1.0}}); }

IncrementModel IncrementModel::gaussian_drift(Vec2 mean, double sdev_along, double sdev_perp) {
  if (!is_finite(mean)) throw ConfigError("model.mean", "must be finite");
  require_finite(sdev_along, "model.sdev_along");
  require_finite(sdev_perp, "model.sdev_perp");
  if (sdev_along < 0.0) throw ConfigError("model.sdev_along", "must be >= 0");
  if (sdev_perp < 0.0) throw ConfigError("model.sdev_perp", "must be >= 0");
  return IncrementModel(GaussianDrift{mean, sdev_along, sdev_perp});
}

std::optional<std::vector<Atom>> IncrementModel::atoms() const {
  if (const auto* f = std::get_if<FiniteSupport>(&law_)) return f->atoms;
  if (std::holds_alternative<TwoPointDegenerate>(law_))
    return std::vector<Atom>{{Vec2{1.0, 1.0}, 0.5}, {Vec2{1.0, -1.0}, 0.5}};
  return std::nullopt;
}

std::string IncrementModel::descriptor() const {
  return std::visit(overloaded{
                        [](const CircleDrift& c) { return "circle_drift(mu=" + format_number(c.mu) + ")"; },
                        [](const TwoPointDegenerate&) { return std::string("two_point_degenerate"); },
                        [](const FiniteSupport& f) {
                          std::string s = "finite_support(";
                          for (std::size_t k = 0; k < f.atoms.size(); ++k) {
                            if (k) s += ";";
                            const Atom& a = f.atoms[k];
                            s += format_number(a.value.x) + " " + format_number(a.value.y) + " p=" +
                                 format_number(a.probability);
                          }
                          return s + ")";
                        },
                        [](const GaussianDrift& g) {
                          return "gaussian_drift(mean=" + format_number(g.mean.x) + " " + format_number(g.mean.y) +
                                 ";along=" + format_number(g.sdev_along) + ";perp=" + format_number(g.sdev_perp) + ")";
                        },
                    },
                    law_);
}

Vec2 IncrementModel::transform(const double (&u)[4]) const {
  return std::visit(overloaded{
                        [&](const CircleDrift& c) {
                          const double t = 2.0 * kPi * u[0];
                          return Vec2{c.mu + std::cos(t), std::sin(t)};
                        },
                        [&](const TwoPointDegenerate&) { return Vec2{1.0, u[0] < 0.5 ? 1.0 : -1.0}; },
                        [&](const FiniteSupport& f) {
                          const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u[0]);
                          const std::size_t k =
                              std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), f.atoms.size() - 1);
                          return f.atoms[k].value;
                        },
                        [&](const GaussianDrift& g) {
                          const double r = std::sqrt(-2.0 * std::log(1.0 - u[0]));
                          const double t = 2.0 * kPi * u[1];
                          const double along = g.sdev_along * r * std::cos(t);
                          const double perp = g.sdev_perp * r * std::sin(t);
                          const double m = norm(g.mean);
                          const Vec2 a = m > 0.0 ? (1.0 / m) * g.mean : Vec2{1.0, 0.0};
                          const Vec2 p{-a.y, a.x};
                          return g.mean + along * a + perp * p;
                        },
                    },
                    law_);
}

Vec2 sample_increment(const IncrementModel& model, SeedSpec seed, std::uint64_t k) {
  const Rng rng(seed);
  const double u[4] = {rng.uniform_at(4 * k), rng.uniform_at(4 * k + 1), rng.uniform_at(4 * k + 2),
                       rng.uniform_at(4 * k + 3)};
  return model.transform(u);
}

Vec2 sample_replacement(const IncrementModel& model, SeedSpec seed, std::uint64_t i) {
  return sample_increment(model, seed.derived(kReplacementLane), i - 1);
}

Walk generate_walk(const IncrementModel& model, std::size_t steps, SeedSpec seed) {
  const Rng rng(seed);
  std::vector<Vec2> inc;
  inc.reserve(steps);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double u[4] = {rng.uniform_at(4 * k), rng.uniform_at(4 * k + 1), rng.uniform_at(4 * k + 2),
                         rng.uniform_at(4 * k + 3)};
    inc.push_back(model.transform(u));
  }
  WalkPath path = WalkPath::from_increments(inc);
  return Walk{std::move(path), std::move(inc)};
}

WalkPath resample_path(const ResampleView& view) {
  const std::size_t n = view.increments.size();
  if (view.index < 1 || view.index > n) throw Error("resample index out of range");
  std::vector<Vec2> pts;
  pts.reserve(n + 1);
  Vec2 s{};
  pts.push_back(s);
  const Vec2 shift = view.replacement - view.original();
  for (std::size_t j = 1; j <= n; ++j) {
    s += view.increments[j - 1];
    pts.push_back(j >= view.index ? s + shift : s);
  }
  return WalkPath(std::move(pts));
}

double perimeter_delta(const ResampleView& view) {
  const WalkPath modified = resample_path(view);
  const WalkPath base = WalkPath::from_increments(view.increments);
  return convex_hull(base.points()).perimeter - convex_hull(modified.points()).perimeter;
}

std::vector<double> delta_profile(const ResampleView& view, const AngleGrid& grid) {
  const WalkPath modified = resample_path(view);
  const WalkPath base = WalkPath::from_increments(view.increments);
  // Extremal projections are attained at hull vertices.
  const HullSummary h0 = convex_hull(base.points());
  const HullSummary h1 = convex_hull(modified.points());
  std::vector<double> r0 = range_profile(h0.vertices, grid);
  const std::vector<double> r1 = range_profile(h1.vertices, grid);
  for (std::size_t k = 0; k < r0.size(); ++k) r0[k] -= r1[k];
  return r0;
}

}  // namespace hullwalk
