#pragma once

// Brute-force geometry used as oracles in the tests.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "flab/point.hpp"

namespace flab::test {

inline double polygon_area(const std::vector<Point>& v) {
  double a = 0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * std::abs(a);
}

inline bool point_in_polygon(Point z, const std::vector<Point>& v) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > z.y) != (v[j].y > z.y) &&
        z.x < (v[j].x - v[i].x) * (z.y - v[i].y) / (v[j].y - v[i].y) + v[i].x)
      in = !in;
  }
  return in;
}

inline double polyline_distance(Point z, const std::vector<Point>& v) {
  double d = 1e300;
  for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, segment_distance(z, v[i], v[(i + 1) % v.size()]));
  return d;
}

inline bool segments_cross(Point a, Point b, Point c, Point d) {
  auto orient = [](Point p, Point q, Point r) {
    const double x = cross(q - p, r - p);
    return (x > 1e-15) - (x < -1e-15);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return false;
}

/// No two non-adjacent edges of the closed polygon intersect (grid-bucketed).
inline bool polygon_is_simple(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const Point& p : v) {
    x0 = std::min(x0, p.x); y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x); y1 = std::max(y1, p.y);
  }
  const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
  const double cw = std::max(x1 - x0, y1 - y0) / cells + 1e-12;
  std::map<std::pair<int, int>, std::vector<std::size_t>> bucket;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i], b = v[(i + 1) % n];
    const int i0 = static_cast<int>((std::min(a.x, b.x) - x0) / cw), i1 = static_cast<int>((std::max(a.x, b.x) - x0) / cw);
    const int j0 = static_cast<int>((std::min(a.y, b.y) - y0) / cw), j1 = static_cast<int>((std::max(a.y, b.y) - y0) / cw);
    for (int i2 = i0; i2 <= i1; ++i2)
      for (int j2 = j0; j2 <= j1; ++j2) bucket[{i2, j2}].push_back(i);
  }
  for (const auto& [key, segs] : bucket) {
    for (std::size_t p = 0; p < segs.size(); ++p) {
      for (std::size_t q = p + 1; q < segs.size(); ++q) {
        const std::size_t i = segs[p], j = segs[q];
        if ((i + 1) % n == j || (j + 1) % n == i) continue;
        if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
      }
    }
  }
  return true;
}

/// Half the minimal width of the hull by enumerating every pair direction:
/// an optimal strip is flush with a hull edge, i.e. with some pair of points.
inline double brute_half_width(const std::vector<Point>& pts) {
  double best = 1e300;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Point d = pts[j] - pts[i];
      const double len = length(d);
      if (len == 0) continue;
      const Point nrm{-d.y / len, d.x / len};
      double lo = 1e300, hi = -1e300;
      for (const Point& p : pts) {
        const double s = dot(p, nrm);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      best = std::min(best, hi - lo);
    }
  }
  return best == 1e300 ? 0.0 : 0.5 * best;
}

/// Half-width by a dense angle grid refined around the best angle.
inline double angle_search_half_width(const std::vector<Point>& pts) {
  auto width = [&](double th) {
    const Point nrm{std::cos(th), std::sin(th)};
    double lo = 1e300, hi = -1e300;
    for (const Point& p : pts) {
      lo = std::min(lo, dot(p, nrm));
      hi = std::max(hi, dot(p, nrm));
    }
    return hi - lo;
  };
  double best_th = 0, best = 1e300;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const double th = M_PI * k / n;
    const double w = width(th);
    if (w < best) { best = w; best_th = th; }
  }
  double step = M_PI / n;
  for (int it = 0; it < 60; ++it) {
    for (double th : {best_th - step, best_th + step}) {
      const double w = width(th);
      if (w < best) { best = w; best_th = th; }
    }
    step *= 0.6;
  }
  return 0.5 * best;
}

}  // namespace flab::test
