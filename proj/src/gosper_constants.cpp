#include <algorithm>
#include <cmath>
#include <limits>

#include "flab/error.hpp"
#include "flab/golden.hpp"
#include "flab/gosper.hpp"

namespace flab {

namespace {

// Level-0 lattice point whose generation-g tile holds raw point w.
Eisenstein locate_raw(Complex w, int g, const Complex& lambda_g) {
  const Eisenstein c0 = hex_round(w);
  Eisenstein e = hex_round((w - to_complex(c0)) * lambda_g);
  for (int k = 0; k < g; ++k) e = split_digit(e).quotient;
  return e + c0;
}

std::vector<Point> convex_hull(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (p.size() < 3) return p;
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

double compute_raw_diameter(int generation) {
  const auto raw = raw_boundary_polygon(generation);
  std::vector<Point> pts;
  pts.reserve(raw.size());
  for (const Complex& w : raw) pts.push_back(to_point(w));
  const auto hull = convex_hull(std::move(pts));
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, distance(hull[i], hull[j]));
  return best;
}

double compute_raw_inradius(int generation) {
  return boundary_index(generation).distance(Complex(0.0, 0.0)) -
         gosper::raw_polygon_deviation(generation);
}

int min_a2(double eta0) {
  return static_cast<int>(std::ceil(3.0 - std::log(eta0 / 2.0) / gosper::kLogAbsLambda));
}

int min_a3(double d0) {
  const int a = static_cast<int>(std::floor(3.0 - std::log(d0) / gosper::kLogAbsLambda)) + 1;
  return std::max(2, a);
}

TilingConstants compute_constants(int generation, const ConstantsSearch& search) {
  if (generation < 4) throw InvalidArgument("compute_constants needs generation >= 4");
  const BoundaryIndex& index = boundary_index(generation);
  const double dev = gosper::raw_polygon_deviation(generation);
  const double diam = compute_raw_diameter(generation);

  // Ring-2 lattice offsets: the nearest tiles that are not neighbours of tile 0.
  std::vector<Eisenstein> ring2;
  for (const Eisenstein& u : kUnits) {
    ring2.push_back(u + u);
  }
  for (std::size_t i = 0; i < kUnits.size(); ++i) ring2.push_back(kUnits[i] + kUnits[(i + 1) % 6]);

  double gap = std::numeric_limits<double>::infinity();
  for (const Eisenstein& off : ring2) {
    const Complex c = to_complex(off);
    for (const Point& v : index.vertices()) gap = std::min(gap, index.distance(to_complex(v) + c));
  }
  const double d0_raw = gap - 2.0 * dev;
  if (!(d0_raw > 0.0)) {
    throw Error("tile gap bound is not positive at generation " + std::to_string(generation) +
                "; use a finer generation");
  }

  TilingConstants out;
  out.generation = generation;
  out.d0 = d0_raw / diam;
  out.inradius = compute_raw_inradius(generation) / diam;

  // eta0: every segment of length d0 starting in tile 0 must meet core(G, 2 eta)
  // of some level-0 tile; eta for a segment is half its deepest sampled point.
  const Complex lambda_g = std::pow(gosper::kLambda, generation);
  const double half = 0.5 * diam + dev;
  const int n = std::max(2, search.start_grid);
  double worst = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : worst) schedule(dynamic)
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Complex p(-half + 2.0 * half * (i + 0.5) / n, -half + 2.0 * half * (j + 0.5) / n);
      if (!raw_tile_contains(p, generation)) continue;
      for (int k = 0; k < search.angles; ++k) {
        const Complex dir = std::polar(d0_raw, (M_PI / 3.0) * k / search.angles);
        double deepest = 0.0;
        for (int s = 0; s <= search.samples; ++s) {
          const Complex q = p + dir * (static_cast<double>(s) / search.samples);
          const Eisenstein c = locate_raw(q, generation, lambda_g);
          deepest = std::max(deepest, index.distance(q - to_complex(c)) - dev);
        }
        worst = std::min(worst, 0.5 * deepest / diam);
      }
    }
  }
  out.eta0 = std::floor(worst / search.resolution) * search.resolution;
  if (!(out.eta0 > 0.0)) throw Error("eta0 search found no positive value");
  out.a2 = min_a2(out.eta0);
  out.a3 = min_a3(out.d0);
  return out;
}

TilingConstants golden_constants() {
  return {golden::kD0, golden::kEta0, golden::kInradius, golden::kA2, golden::kA3, golden::kGeneration};
}

}  // namespace flab
