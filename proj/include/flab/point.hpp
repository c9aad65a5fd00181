#pragma once

#include <cmath>
#include <complex>

namespace flab {

using Complex = std::complex<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Point&) const = default;
};

inline Complex to_complex(Point p) { return {p.x, p.y}; }
inline Point to_point(Complex z) { return {z.real(), z.imag()}; }

inline double norm2(Point p) { return p.x * p.x + p.y * p.y; }
inline double length(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return length(a - b); }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Distance from `p` to the closed segment [a, b].
inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + ab * t);
}

}  // namespace flab
