#include "flab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "flab/error.hpp"

namespace flab {

double t_quantile(double p, int df) {
  if (df < 1) throw InvalidArgument("t quantile needs df >= 1");
  return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_line: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw InvalidArgument("fit_line needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFitError("all abscissae are equal");
  if (syy == 0.0) throw DegenerateFitError("all ordinates are equal");
  LineFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    sse += r * r;
  }
  f.r2 = 1.0 - sse / syy;
  f.slope_se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  const double t = t_quantile(0.975, static_cast<int>(n) - 2);
  f.ci_lo = f.slope - t * f.slope_se;
  f.ci_hi = f.slope + t * f.slope_se;
  return f;
}

LineFit exponent_fit(const std::vector<std::pair<double, double>>& pairs) {
  std::set<double> distinct;
  double lo = 1e300, hi = 0.0;
  std::vector<double> x, y;
  for (const auto& [n, c] : pairs) {
    if (!(n > 0.0) || !(c > 0.0)) throw InvalidArgument("exponent_fit needs positive n and counts");
    distinct.insert(n);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    x.push_back(std::log(n));
    y.push_back(std::log(c));
  }
  if (distinct.size() < 4) throw InvalidArgument("exponent_fit needs at least 4 distinct n");
  if (std::log10(hi / lo) < 1.5 - 1e-12) throw InvalidArgument("exponent_fit needs n spanning 1.5 decades");
  return fit_line(x, y);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The endpoints are exact at 0 and n successes; rounding must not lift a
  // zero-success interval off 0.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

MeanStats mean_stats(const std::vector<double>& v) {
  MeanStats s;
  s.n = v.size();
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    s.se = s.sd / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

}  // namespace flab
