#pragma once

// Least-squares line fits, exponent fits and interval helpers.

#include <cstddef>
#include <utility>
#include <vector>

namespace flab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;  // standard error of the slope
  double ci_lo = 0.0;     // 95% t interval for the slope
  double ci_hi = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = slope * x + intercept. DegenerateFitError when
/// all x or all y coincide, InvalidArgument with fewer than 3 points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Quantile of Student's t with `df` degrees of freedom.
double t_quantile(double p, int df);

/// Slope of log(mean_count) against log(n). Needs >= 4 distinct n spanning
/// >= 1.5 decades.
LineFit exponent_fit(const std::vector<std::pair<double, double>>& pairs);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion at the given z (1.96 = 95%).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct MeanStats {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};
MeanStats mean_stats(const std::vector<double>& v);

}  // namespace flab
