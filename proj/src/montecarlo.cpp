#include "hullwalk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hullwalk/error.hpp"
#include "hullwalk/geometry.hpp"

namespace hullwalk {

namespace {

// Leave-one-out means: out[r] is the mean of all samples but r.
std::vector<double> leave_one_out_means(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v;
  const double k = static_cast<double>(x.size());
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) out[r] = (total - x[r]) / (k - 1.0);
  return out;
}

void require_drift(const IncrementModel& model, const char* what) {
  if (has_zero_drift(model)) throw Error(std::string(what) + " undefined for zero drift");
}

}  // namespace

void McConfig::validate() const {
  if (reps < 2) throw ConfigError("reps", "must be >= 2");
  if (n_values.empty()) throw ConfigError("n_values", "must be nonempty");
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    if (n_values[k] < 1) throw ConfigError("n_values", "step counts must be >= 1");
    if (k > 0 && n_values[k] <= n_values[k - 1]) throw ConfigError("n_values", "must be strictly increasing");
  }
  if (grid_size < 2) throw ConfigError("grid_size", "must be >= 2");
  if (!(delta > 0.0 && delta < 0.5 * kPi)) throw ConfigError("delta", "must satisfy delta in (0, pi/2)");
  if (!(gamma > 0.0 && gamma < 0.5)) throw ConfigError("gamma", "must satisfy gamma in (0, 1/2)");
  if (panel_size < 1) throw ConfigError("panel_size", "must be >= 1");
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r; (r = next.fetch_add(1)) < count && !failed.load();) {
        try {
          body(r);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> perimeter_samples(const McConfig& config, std::size_t n) {
  std::vector<double> out(config.reps);
  parallel_for(config.reps, config.threads, [&](std::size_t r) {
    const Walk w = generate_walk(config.model, n, config.seed(r));
    out[r] = convex_hull(w.path.points()).perimeter;
  });
  return out;
}

VarianceSweep variance_sweep(const McConfig& config) {
  config.validate();
  const auto& ns = config.n_values;
  const std::size_t reps = config.reps;
  std::vector<double> samples(ns.size() * reps);  // [k * reps + r]
  parallel_for(reps, config.threads, [&](std::size_t r) {
    const Walk w = generate_walk(config.model, ns.back(), config.seed(r));
    const auto pts = w.path.points();
    IncrementalHull hull;
    std::size_t done = 0;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      hull.extend(pts.subspan(done, ns[k] + 1 - done));
      done = ns[k] + 1;
      samples[k * reps + r] = hull.perimeter();
    }
  });

  VarianceSweep out;
  out.theory = theory_quantities(config.model);
  std::vector<double> xs, vs, logs;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    SweepPoint p;
    p.n = ns[k];
    p.perimeter = summarize(std::span<const double>(samples).subspan(k * reps, reps));
    p.var_over_n = p.perimeter.variance / static_cast<double>(p.n);
    p.var_over_n_se = p.perimeter.standard_error_of_variance / static_cast<double>(p.n);
    out.points.push_back(p);
    xs.push_back(static_cast<double>(p.n));
    vs.push_back(p.perimeter.variance);
    logs.push_back(std::log(static_cast<double>(p.n)));
  }
  out.slope = fit_slope_through_origin(xs, vs);
  if (out.theory.degenerate && ns.size() >= 2) out.log_fit = fit_line(logs, vs);
  return out;
}

CltResult clt_samples(const McConfig& config, std::size_t n) {
  require_drift(config.model, "CLT");
  const double sigma_sq = sigma_squared(config.model);
  if (theory_quantities(config.model).degenerate) throw Error("CLT undefined in degenerate case");
  const std::vector<double> l = perimeter_samples(config, n);
  const SummaryStats s = summarize(l);
  const std::vector<double> centre = leave_one_out_means(l);
  CltResult out;
  const double sd = std::sqrt(s.variance);
  const double sd_theory = std::sqrt(sigma_sq * static_cast<double>(n));
  for (std::size_t r = 0; r < l.size(); ++r) {
    out.standardized.push_back((l[r] - centre[r]) / sd);
    out.standardized_theory.push_back((l[r] - centre[r]) / sd_theory);
  }
  out.ks_distance = ks_distance(out.standardized, normal_cdf);
  out.ks_distance_theory = ks_distance(out.standardized_theory, normal_cdf);
  out.critical_value = ks_critical_value(l.size(), 0.01);
  return out;
}

SummaryStats theorem0_residual(const McConfig& config, std::size_t n) {
  require_drift(config.model, "theorem0_residual");
  std::vector<double> l(config.reps), ysum(config.reps);
  parallel_for(config.reps, config.threads, [&](std::size_t r) {
    const Walk w = generate_walk(config.model, n, config.seed(r));
    l[r] = convex_hull(w.path.points()).perimeter;
    double acc = 0.0;
    for (const Vec2& z : w.increments) acc += y_increment(z, config.model);
    ysum[r] = acc;
  });
  const std::vector<double> centre = leave_one_out_means(l);
  std::vector<double> sq(config.reps);
  for (std::size_t r = 0; r < config.reps; ++r) {
    const double res = (l[r] - centre[r] - ysum[r]) / std::sqrt(static_cast<double>(n));
    sq[r] = res * res;
  }
  return summarize(sq);
}

double DecompositionRecord::variance_relative_error() const {
  const double scale = std::max({std::abs(var_exact), std::abs(sum_ed2), std::numeric_limits<double>::min()});
  return std::abs(sum_ed2 - var_exact) / scale;
}

double DecompositionRecord::pathwise_relative_error() const {
  return max_pathwise_error / std::max(std::abs(mean_exact), std::numeric_limits<double>::min());
}

bool DecompositionRecord::satisfies(double relative_tolerance) const {
  const double scale = std::max(std::abs(mean_exact), std::numeric_limits<double>::min());
  return variance_relative_error() <= relative_tolerance && pathwise_relative_error() <= relative_tolerance &&
         max_martingale_error <= relative_tolerance * scale && max_increment_form_error <= relative_tolerance * scale;
}

DecompositionRecord exact_decomposition(const IncrementModel& model, std::size_t n, std::size_t max_states) {
  const auto atoms_opt = model.atoms();
  if (!atoms_opt) throw Error("exact decomposition needs a finite-support increment law");
  if (n < 1) throw Error("exact decomposition needs n >= 1");
  const std::vector<Atom>& atoms = *atoms_opt;
  const std::size_t k = atoms.size();

  // power[j] = k^j
  std::vector<std::size_t> power{1};
  for (std::size_t j = 0; j < n; ++j) {
    if (power.back() > max_states / k)
      throw Error("state space too large: " + std::to_string(k) + "^" + std::to_string(n) + " exceeds " +
                  std::to_string(max_states));
    power.push_back(power.back() * k);
  }
  const std::size_t total = power[n];

  // Sequence s has digit d_i = (s / k^(n-i)) % k for step i = 1..n.
  auto digit = [&](std::size_t s, std::size_t i) { return (s / power[n - i]) % k; };

  std::vector<double> length(total), prob(total);
  std::vector<Vec2> pts(n + 1);
  for (std::size_t s = 0; s < total; ++s) {
    double p = 1.0;
    Vec2 pos{};
    for (std::size_t i = 1; i <= n; ++i) {
      const Atom& a = atoms[digit(s, i)];
      pos += a.value;
      pts[i] = pos;
      p *= a.probability;
    }
    length[s] = convex_hull(pts).perimeter;
    prob[s] = p;
  }

  DecompositionRecord rec;
  rec.n = n;
  rec.paths = total;
  for (std::size_t s = 0; s < total; ++s) rec.mean_exact += prob[s] * length[s];
  for (std::size_t s = 0; s < total; ++s) {
    const double d = length[s] - rec.mean_exact;
    rec.var_exact += prob[s] * d * d;
  }

  // cond[i][q] = E[L | F_i] on prefix q (length i), by averaging suffixes.
  std::vector<std::vector<double>> cond(n + 1);
  cond[n] = length;
  for (std::size_t i = n; i-- > 0;) {
    cond[i].assign(power[i], 0.0);
    for (std::size_t q = 0; q < power[i]; ++q)
      for (std::size_t d = 0; d < k; ++d) cond[i][q] += atoms[d].probability * cond[i + 1][q * k + d];
  }

  // prefix_prob[i][q] = P[prefix q]
  std::vector<std::vector<double>> prefix_prob(n + 1);
  prefix_prob[0] = {1.0};
  for (std::size_t i = 1; i <= n; ++i) {
    prefix_prob[i].resize(power[i]);
    for (std::size_t q = 0; q < power[i]; ++q) prefix_prob[i][q] = prefix_prob[i - 1][q / k] * atoms[q % k].probability;
  }

  // D_{n,i} from its definition: E[L_n - L_n^(i) | F_i], averaging over
  // Z_i' and the suffix Z_{i+1}..Z_n.
  std::vector<std::vector<double>> dni(n + 1);
  rec.expected_d_squared.assign(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    dni[i].assign(power[i], 0.0);
    const std::size_t block = power[n - i];
    for (std::size_t s = 0; s < total; ++s) {
      const std::size_t q = s / block;
      const std::size_t di = digit(s, i);
      double resampled = 0.0;
      for (std::size_t d = 0; d < k; ++d) {
        const std::size_t s_prime = s + (d - di) * block;  // unsigned wrap cancels
        resampled += atoms[d].probability * length[s_prime];
      }
      const double suffix_prob = prefix_prob[n - i][s % block];  // same digit law as a prefix
      dni[i][q] += suffix_prob * (length[s] - resampled);
    }
    for (std::size_t q = 0; q < power[i]; ++q) {
      rec.expected_d_squared[i - 1] += prefix_prob[i][q] * dni[i][q] * dni[i][q];
      const double increment_form = cond[i][q] - cond[i - 1][q / k];
      rec.max_increment_form_error = std::max(rec.max_increment_form_error, std::abs(dni[i][q] - increment_form));
    }
    for (std::size_t q = 0; q < power[i - 1]; ++q) {
      double m = 0.0;
      for (std::size_t d = 0; d < k; ++d) m += atoms[d].probability * dni[i][q * k + d];
      rec.max_martingale_error = std::max(rec.max_martingale_error, std::abs(m));
    }
    rec.sum_ed2 += rec.expected_d_squared[i - 1];
  }

  for (std::size_t s = 0; s < total; ++s) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) acc += dni[i][s / power[n - i]];
    rec.max_pathwise_error = std::max(rec.max_pathwise_error, std::abs(length[s] - rec.mean_exact - acc));
  }
  return rec;
}

std::vector<std::size_t> panel_indices(std::size_t n, std::size_t panel_size) {
  std::vector<std::size_t> out;
  if (n == 0 || panel_size == 0) return out;
  if (panel_size == 1) return {(n + 1) / 2};
  if (panel_size >= n) {
    for (std::size_t i = 1; i <= n; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t k = 0; k < panel_size; ++k) {
    const double t = static_cast<double>(k) * static_cast<double>(n - 1) / static_cast<double>(panel_size - 1);
    const std::size_t i = 1 + static_cast<std::size_t>(std::llround(t));
    if (out.empty() || out.back() != i) out.push_back(i);
  }
  return out;
}

namespace {

struct IndexedPoint {
  Vec2 p;
  std::size_t j;
};

// Support profile of one index block of the path, possibly split at the
// resampled step into an unshifted head and a shifted tail.
struct BlockExtent {
  std::size_t begin = 0, end = 0;  // [begin, end)
  std::vector<IndexedPoint> sorted;
  SupportProfile profile;  // original coordinates
};

std::vector<Vec2> hull_of(const std::vector<IndexedPoint>& sorted, std::size_t lo, std::size_t hi) {
  std::vector<Vec2> pts;
  pts.reserve(sorted.size());
  for (const IndexedPoint& ip : sorted)
    if (ip.j >= lo && ip.j < hi) pts.push_back(ip.p);
  return convex_hull_presorted(pts, 0.0);
}

}  // namespace

EventDiagnostic event_probability(const McConfig& config, std::size_t n) {
  config.validate();
  require_drift(config.model, "event_probability");
  if (n < 1) throw Error("event_probability needs n >= 1");
  const AngleGrid grid(config.grid_size);
  const std::size_t g = grid.size();
  const double dn = static_cast<double>(n);
  const std::size_t lo_end = static_cast<std::size_t>(std::ceil(config.gamma * dn));
  const std::size_t hi_start = static_cast<std::size_t>(std::floor((1.0 - config.gamma) * dn)) + 1;
  std::vector<std::size_t> window;  // grid nodes in [delta, pi - delta]
  for (std::size_t k = 0; k < g; ++k)
    if (grid.theta(k) >= config.delta && grid.theta(k) <= kPi - config.delta) window.push_back(k);

  EventDiagnostic out;
  out.n = n;
  out.delta = config.delta;
  out.gamma = config.gamma;
  out.indices = panel_indices(n, config.panel_size);
  const std::size_t panel = out.indices.size();

  std::vector<unsigned char> hits(config.reps * panel, 0);
  std::vector<std::size_t> violations(config.reps, 0);

  parallel_for(config.reps, config.threads, [&](std::size_t r) {
    const SeedSpec seed = config.seed(r);
    const Walk w = generate_walk(config.model, n, seed);
    // Angles are measured in canonical orientation, drift along +y.
    std::vector<Vec2> pts;
    pts.reserve(n + 1);
    for (const Vec2& p : w.path.points()) pts.push_back(to_canonical_orientation(p, config.model));

    std::vector<BlockExtent> blocks;
    for (auto [b, e] : {std::pair{std::size_t{0}, lo_end}, std::pair{lo_end, hi_start}, std::pair{hi_start, n + 1}}) {
      BlockExtent blk;
      blk.begin = b;
      blk.end = e;
      for (std::size_t j = b; j < e; ++j) blk.sorted.push_back({pts[j], j});
      std::sort(blk.sorted.begin(), blk.sorted.end(),
                [](const IndexedPoint& a, const IndexedPoint& c) { return a.p < c.p || (a.p == c.p && a.j < c.j); });
      if (!blk.sorted.empty()) blk.profile = support_profile(hull_of(blk.sorted, b, e), grid);
      blocks.push_back(std::move(blk));
    }
    const BlockExtent& low = blocks[0];
    const BlockExtent& mid = blocks[1];
    const BlockExtent& high = blocks[2];
    const double inf = std::numeric_limits<double>::infinity();

    // Event conditions given per-block extrema at each window node.
    auto holds = [&](const std::vector<SupportProfile>& prof) {
      for (std::size_t k : window) {
        const double min_low = prof[0].min[k], max_low = prof[0].max[k];
        const double min_mid = mid.sorted.empty() ? inf : prof[1].min[k];
        const double max_mid = mid.sorted.empty() ? -inf : prof[1].max[k];
        const double min_high = prof[2].min[k], max_high = prof[2].max[k];
        // Ties go to the smallest index, which lies in the lower block.
        if (!(min_low <= std::min(min_mid, min_high))) return false;
        if (!(max_high > std::max(max_low, max_mid))) return false;
      }
      return true;
    };
    auto range_at = [&](const std::vector<SupportProfile>& prof, std::size_t k) {
      double hi = -inf, lo = inf;
      for (std::size_t b = 0; b < 3; ++b) {
        if (blocks[b].sorted.empty()) continue;
        hi = std::max(hi, prof[b].max[k]);
        lo = std::min(lo, prof[b].min[k]);
      }
      return hi - lo;
    };

    const std::vector<SupportProfile> original{low.profile, mid.profile, high.profile};
    const bool original_ok = holds(original);
    double max_norm = 0.0;
    for (const Vec2& p : pts) max_norm = std::max(max_norm, norm(p));

    for (std::size_t t = 0; t < panel; ++t) {
      const std::size_t i = out.indices[t];
      const Vec2 zi = to_canonical_orientation(w.increments[i - 1], config.model);
      const Vec2 zp = to_canonical_orientation(sample_replacement(config.model, seed, i), config.model);
      const Vec2 shift = zp - zi;
      std::vector<double> shift_proj(g);
      for (std::size_t k = 0; k < g; ++k) shift_proj[k] = dot(shift, grid.direction(k));

      std::vector<SupportProfile> res(3);
      for (std::size_t b = 0; b < 3; ++b) {
        const BlockExtent& blk = blocks[b];
        if (blk.sorted.empty()) continue;
        if (i >= blk.end) {
          res[b] = blk.profile;
        } else if (i <= blk.begin) {
          res[b] = blk.profile;
          for (std::size_t k = 0; k < g; ++k) {
            res[b].max[k] += shift_proj[k];
            res[b].min[k] += shift_proj[k];
          }
        } else {
          // Block straddles i: head [begin, i) fixed, tail [i, end) shifted.
          const SupportProfile head = support_profile(hull_of(blk.sorted, blk.begin, i), grid);
          const SupportProfile tail = support_profile(hull_of(blk.sorted, i, blk.end), grid);
          res[b].max.resize(g);
          res[b].min.resize(g);
          for (std::size_t k = 0; k < g; ++k) {
            res[b].max[k] = std::max(head.max[k], tail.max[k] + shift_proj[k]);
            res[b].min[k] = std::min(head.min[k], tail.min[k] + shift_proj[k]);
          }
        }
      }
      if (original_ok && holds(res)) hits[r * panel + t] = 1;

      const double bound = 2.0 * norm(zi) + 2.0 * norm(zp);
      const double slack = 1e-9 * (bound + max_norm + norm(shift));
      for (std::size_t k = 0; k < g; ++k) {
        const double delta_k = range_at(original, k) - range_at(res, k);
        if (std::abs(delta_k) > bound + slack) ++violations[r];
      }
    }
  });

  out.frequencies.assign(panel, 0.0);
  for (std::size_t r = 0; r < config.reps; ++r)
    for (std::size_t t = 0; t < panel; ++t) out.frequencies[t] += hits[r * panel + t];
  for (double& f : out.frequencies) f /= static_cast<double>(config.reps);
  out.min_estimate = panel ? *std::min_element(out.frequencies.begin(), out.frequencies.end()) : 0.0;
  out.bound_checks = config.reps * panel * g;
  for (std::size_t v : violations) out.bound_violations += v;
  return out;
}

CauchyCheck cauchy_check(const McConfig& config, std::size_t n) {
  std::vector<double> rel(config.reps);
  parallel_for(config.reps, config.threads, [&](std::size_t r) {
    const Walk w = generate_walk(config.model, n, config.seed(r));
    const double direct = convex_hull(w.path.points()).perimeter;
    const double quad = cauchy_perimeter(w.path, config.grid_size);
    rel[r] = direct > 0.0 ? std::abs(quad - direct) / direct : std::abs(quad);
  });
  CauchyCheck out;
  out.n = n;
  for (double v : rel) {
    out.max_relative_error = std::max(out.max_relative_error, v);
    out.mean_relative_error += v;
  }
  out.mean_relative_error /= static_cast<double>(rel.size());
  return out;
}

SwbCheck swb_check(const McConfig& config, std::size_t n) {
  SwbCheck out;
  out.n = n;
  out.direct = summarize(perimeter_samples(config, n));
  out.swb = swb_expected_perimeter(config.model, n, config.reps, SeedSpec{config.master_seed, config.reps});
  out.combined_se = std::hypot(out.direct.standard_error_of_mean, out.swb.standard_error_of_mean);
  const double diff = out.direct.mean - out.swb.mean;
  out.z_score = out.combined_se > 0.0 ? diff / out.combined_se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
  return out;
}

}  // namespace hullwalk
