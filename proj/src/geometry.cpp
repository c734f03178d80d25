#include "hullwalk/geometry.hpp"

#include <algorithm>
#include <limits>

#include "hullwalk/error.hpp"

namespace hullwalk {

namespace {

// True when o -> a -> b is a strict left turn beyond the tolerance.
bool left_turn(Vec2 o, Vec2 a, Vec2 b, double tolerance) {
  const Vec2 oa = a - o, ob = b - o;
  const double c = cross(oa, ob);
  if (tolerance == 0.0) return c > 0.0;
  return c > tolerance * std::sqrt(dot(oa, oa) * dot(ob, ob));
}

void check_finite(std::span<const Vec2> points) {
  for (const Vec2& p : points)
    if (!is_finite(p)) throw Error("non-finite input");
}

}  // namespace

WalkPath::WalkPath() : points_{Vec2{}} {}

WalkPath::WalkPath(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error("walk path needs at least one point");
  if (points_.front() != Vec2{}) throw Error("walk path must start at the origin");
  check_finite(points_);
}

WalkPath WalkPath::from_increments(std::span<const Vec2> increments) {
  std::vector<Vec2> pts;
  pts.reserve(increments.size() + 1);
  Vec2 s{};
  pts.push_back(s);
  for (const Vec2& z : increments) {
    s += z;
    pts.push_back(s);
  }
  return WalkPath(std::move(pts));
}

std::vector<Vec2> convex_hull_presorted(std::span<const Vec2> sorted, double tolerance) {
  std::vector<Vec2> hull;
  if (sorted.empty()) return hull;
  if (sorted.front() == sorted.back()) {
    // Sorted and first == last means every point is identical.
    hull.push_back(sorted.front());
    return hull;
  }
  hull.reserve(2 * sorted.size());
  for (const Vec2& p : sorted) {
    if (!hull.empty() && hull.back() == p) continue;
    while (hull.size() >= 2 && !left_turn(hull[hull.size() - 2], hull.back(), p, tolerance)) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (std::size_t k = sorted.size() - 1; k-- > 0;) {
    const Vec2& p = sorted[k];
    if (hull.back() == p) continue;
    while (hull.size() >= lower && !left_turn(hull[hull.size() - 2], hull.back(), p, tolerance)) hull.pop_back();
    hull.push_back(p);
  }
  hull.pop_back();  // back at the starting point
  return hull;
}

double polygon_perimeter(std::span<const Vec2> vertices) {
  const std::size_t m = vertices.size();
  if (m < 2) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) total += norm(vertices[(k + 1) % m] - vertices[k]);
  return total;
}

HullSummary convex_hull(std::span<const Vec2> points) {
  if (points.empty()) throw Error("empty point set");
  check_finite(points);
  std::vector<Vec2> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  HullSummary out;
  out.vertices = convex_hull_presorted(sorted);
  out.perimeter = polygon_perimeter(out.vertices);
  return out;
}

SupportExtrema support_extrema(const WalkPath& path, double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw Error("theta must lie in [0, pi]");
  const Vec2 e = unit_vector(theta);
  SupportExtrema out;
  out.theta = theta;
  const auto pts = path.points();
  out.max_projection = out.min_projection = dot(pts[0], e);
  for (std::size_t j = 1; j < pts.size(); ++j) {
    const double p = dot(pts[j], e);
    if (p > out.max_projection) {
      out.max_projection = p;
      out.argmax = j;
    }
    if (p < out.min_projection) {
      out.min_projection = p;
      out.argmin = j;
    }
  }
  return out;
}

double range_function(const WalkPath& path, double theta) {
  const SupportExtrema s = support_extrema(path, theta);
  return s.max_projection - s.min_projection;
}

AngleGrid::AngleGrid(std::size_t size) {
  if (size < 2) throw Error("angle grid needs at least 2 nodes");
  directions_.reserve(size);
  const double h = kPi / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) directions_.push_back(unit_vector(h * static_cast<double>(k)));
}

SupportProfile support_profile(std::span<const Vec2> points, const AngleGrid& grid) {
  SupportProfile out;
  out.max.assign(grid.size(), -std::numeric_limits<double>::infinity());
  out.min.assign(grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec2 e = grid.direction(k);
    double hi = out.max[k], lo = out.min[k];
    for (const Vec2& p : points) {
      const double v = p.x * e.x + p.y * e.y;
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    out.max[k] = hi;
    out.min[k] = lo;
  }
  return out;
}

std::vector<double> range_profile(std::span<const Vec2> points, const AngleGrid& grid) {
  SupportProfile s = support_profile(points, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) s.max[k] -= s.min[k];
  return std::move(s.max);
}

double cauchy_perimeter(std::span<const Vec2> points, std::size_t grid_size) {
  if (points.empty()) throw Error("empty point set");
  check_finite(points);
  const AngleGrid grid(grid_size);
  const std::vector<double> r = range_profile(points, grid);
  double total = 0.0;
  for (double v : r) total += v;
  return total * grid.step();
}

double cauchy_perimeter(const WalkPath& path, std::size_t grid_size) {
  return cauchy_perimeter(path.points(), grid_size);
}

double cauchy_error_bound(double perimeter, std::size_t grid_size) {
  const double h = kPi / static_cast<double>(grid_size);
  return 0.25 * h * h * perimeter;
}

void IncrementalHull::extend(std::span<const Vec2> points) {
  if (points.empty()) return;
  check_finite(points);
  scratch_.assign(points.begin(), points.end());
  std::sort(scratch_.begin(), scratch_.end());
  // Merge the sorted new points with the (re-sorted) current vertices.
  std::vector<Vec2> old = vertices_;
  std::sort(old.begin(), old.end());
  std::vector<Vec2> merged;
  merged.reserve(old.size() + scratch_.size());
  std::merge(old.begin(), old.end(), scratch_.begin(), scratch_.end(), std::back_inserter(merged));
  vertices_ = convex_hull_presorted(merged);
  perimeter_ = polygon_perimeter(vertices_);
}

}  // namespace hullwalk
