#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hullwalk {

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error_of_mean = 0.0;
  // sqrt((m4 - (k-3)/(k-1) s^4) / k), from the sample fourth central moment.
  double standard_error_of_variance = 0.0;
};

// Throws hullwalk::Error on an empty sample. A single value has variance 0.
SummaryStats summarize(std::span<const double> values);

// sup_x |F_emp(x) - cdf(x)| for a one-sample Kolmogorov-Smirnov test.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

// Asymptotic critical value sqrt(-ln(alpha/2)/2) / sqrt(count).
double ks_critical_value(std::size_t count, double alpha = 0.01);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Least squares y = slope * x.
double fit_slope_through_origin(std::span<const double> x, std::span<const double> y);
// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace hullwalk
