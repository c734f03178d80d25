#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hullwalk {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
  // Lexicographic (x, then y).
  friend constexpr bool operator<(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }
inline Vec2 unit_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

// Relative tolerance for orientation tests in the hull construction.
inline constexpr double kGeomTolerance = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

// Positions S_0..S_n of a planar walk. S_0 is always the origin.
class WalkPath {
 public:
  WalkPath();  // the zero-step walk {(0,0)}
  // Throws hullwalk::Error unless points is nonempty, starts at the origin
  // and has only finite coordinates.
  explicit WalkPath(std::vector<Vec2> points);

  static WalkPath from_increments(std::span<const Vec2> increments);

  std::size_t steps() const { return points_.size() - 1; }
  std::span<const Vec2> points() const { return points_; }
  const Vec2& operator[](std::size_t j) const { return points_[j]; }

  friend bool operator==(const WalkPath&, const WalkPath&) = default;

 private:
  std::vector<Vec2> points_;
};

// Counterclockwise hull vertices starting from the lexicographically smallest
// point, with collinear boundary points removed. A segment hull has two
// vertices and perimeter twice its length; a single point has perimeter 0.
struct HullSummary {
  std::vector<Vec2> vertices;
  double perimeter = 0.0;
};

struct SupportExtrema {
  double theta = 0.0;
  double max_projection = 0.0;
  double min_projection = 0.0;
  std::size_t argmax = 0;  // smallest index on ties
  std::size_t argmin = 0;
};

// Monotone chain. Throws on empty input ("empty point set") or a non-finite
// coordinate ("non-finite input").
HullSummary convex_hull(std::span<const Vec2> points);

// Hull of points already sorted lexicographically. Duplicates are allowed.
// A turn is treated as collinear when |cross| <= tolerance * |a - o| * |b - o|.
std::vector<Vec2> convex_hull_presorted(std::span<const Vec2> sorted, double tolerance = kGeomTolerance);

// Closed polygon edge-length sum; 0 for one vertex, 2*length for two.
double polygon_perimeter(std::span<const Vec2> vertices);

// Exact max/min of S_j . e_theta over the path. theta must lie in [0, pi].
SupportExtrema support_extrema(const WalkPath& path, double theta);

double range_function(const WalkPath& path, double theta);

// Uniform grid theta_k = k*pi/size, k = 0..size-1, on the half circle. The
// range function is pi-periodic, so the trapezoid rule over [0, pi] reduces
// to (pi/size) * sum_k R(theta_k).
class AngleGrid {
 public:
  explicit AngleGrid(std::size_t size);

  std::size_t size() const { return directions_.size(); }
  double step() const { return kPi / static_cast<double>(size()); }
  double theta(std::size_t k) const { return step() * static_cast<double>(k); }
  Vec2 direction(std::size_t k) const { return directions_[k]; }
  std::span<const Vec2> directions() const { return directions_; }

 private:
  std::vector<Vec2> directions_;
};

// Max and min projection of a point set at every grid direction.
struct SupportProfile {
  std::vector<double> max;
  std::vector<double> min;
};

SupportProfile support_profile(std::span<const Vec2> points, const AngleGrid& grid);
std::vector<double> range_profile(std::span<const Vec2> points, const AngleGrid& grid);

// Composite trapezoid value of the Cauchy integral of R over [0, pi], built
// from the path points directly. grid_size >= 2.
double cauchy_perimeter(const WalkPath& path, std::size_t grid_size = 1024);
double cauchy_perimeter(std::span<const Vec2> points, std::size_t grid_size = 1024);

// Upper bound on |cauchy_perimeter - perimeter|. R'' is a signed measure of
// total mass at most 2L on [0, pi], and the trapezoid kernel is bounded by
// h^2/8, giving h^2 L / 4.
double cauchy_error_bound(double perimeter, std::size_t grid_size);

// Hull of a growing point set, recomputed from the current vertices plus the
// appended points. Used to read off L_n at several n along one path.
class IncrementalHull {
 public:
  void extend(std::span<const Vec2> points);
  double perimeter() const { return perimeter_; }
  std::span<const Vec2> vertices() const { return vertices_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Vec2> scratch_;
  double perimeter_ = 0.0;
};

}  // namespace hullwalk
