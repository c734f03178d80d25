#include "hullwalk/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hullwalk/error.hpp"

namespace hullwalk {

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw Error("summary of an empty sample");
  SummaryStats s;
  s.count = values.size();
  const double k = static_cast<double>(s.count);
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / k;
  if (s.count < 2) return s;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = (v - s.mean) * (v - s.mean);
    m2 += d;
    m4 += d * d;
  }
  s.variance = m2 / (k - 1.0);
  s.standard_error_of_mean = std::sqrt(s.variance / k);
  m4 /= k;
  const double var_of_var = (m4 - (k - 3.0) / (k - 1.0) * s.variance * s.variance) / k;
  s.standard_error_of_variance = std::sqrt(std::max(var_of_var, 0.0));
  return s;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error("KS distance of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double k = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / k - f, f - static_cast<double>(i) / k});
  }
  return d;
}

double ks_critical_value(std::size_t count, double alpha) {
  if (count == 0 || !(alpha > 0.0 && alpha < 1.0)) throw Error("invalid KS critical value request");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(count));
}

double fit_slope_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw Error("fit needs matching nonempty samples");
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  if (sxx == 0.0) throw Error("fit through origin with all x = 0");
  return sxy / sxx;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("line fit needs at least two matching points");
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("line fit with constant x");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace hullwalk
