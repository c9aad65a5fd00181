#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "flab/error.hpp"
#include "flab/golden.hpp"
#include "flab/paths.hpp"
#include "flab/raster.hpp"

using namespace flab;

namespace {

RasterSet from_predicate(double eps, int half, const std::function<bool(Point)>& inside) {
  const Grid grid{eps, {0.0, 0.0}};
  std::vector<Cell> cells;
  for (int j = -half; j <= half; ++j)
    for (int i = -half; i <= half; ++i)
      if (inside(grid.cell_center({i, j}))) cells.push_back({i, j});
  return RasterSet::from_cells(grid, cells);
}

RasterSet circle_raster(double radius, double eps, Point c = {0, 0}, int n = 4000) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double a = 2 * M_PI * k / n;
    pts.push_back({c.x + radius * std::cos(a), c.y + radius * std::sin(a)});
  }
  return rasterize_polyline(pts, Grid{eps, {0, 0}}, true);
}

bool touches_complement(const RasterSet& K, Cell c) {
  for (Cell d : {Cell{c.i + 1, c.j}, Cell{c.i - 1, c.j}, Cell{c.i, c.j + 1}, Cell{c.i, c.j - 1}})
    if (!K.test(d)) return true;
  return false;
}

}  // namespace

TEST_SUITE("geometry_sets") {

TEST_CASE("rasterize: single point") {
  PathSample p;
  p.points = {{0.123, -0.456}};
  const RasterSet K = rasterize_path(p, 0.01);
  CHECK(K.count() == 1);
  CHECK(K.test(K.cell_of({0.123, -0.456})));
}

TEST_CASE("rasterize: axis-aligned segment") {
  const double eps = 0.01;
  for (int L : {1, 7, 40}) {
    const Point a{0.3 * eps, 0.5 * eps};
    const std::vector<Point> seg{a, a + Point{L * eps, 0.0}};
    CHECK(rasterize_polyline(seg, Grid{eps, {0, 0}}).count() == static_cast<std::size_t>(L + 1));
    const std::vector<Point> vseg{a, a + Point{0.0, L * eps}};
    CHECK(rasterize_polyline(vseg, Grid{eps, {0, 0}}).count() == static_cast<std::size_t>(L + 1));
  }
}

TEST_CASE("rasterize: path equals the union of per-segment supercovers") {
  const PathSample p = sample_bm(5000, 1e-4, 42);
  const double eps = 2e-3;
  const RasterSet K = rasterize_path(p, eps);
  const Grid grid{eps, {0, 0}};
  std::set<std::pair<std::int64_t, std::int64_t>> brute;
  for (std::size_t k = 0; k + 1 < p.points.size(); ++k) {
    const std::vector<Point> seg{p.points[k], p.points[k + 1]};
    for (const Cell& c : rasterize_cells(seg, grid).cells) brute.insert({c.i, c.j});
  }
  CHECK(K.count() == brute.size());
  for (const Cell& c : K.cells()) CHECK(brute.count({c.i, c.j}) == 1);
}

TEST_CASE("rasterize: continuous paths give 8-connected rasters") {
  const RasterSet K = rasterize_path(sample_bm(20000, 1e-5, 3), 1e-3);
  // Flood fill with 8-neighbourhood from the first cell reaches every cell.
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  const auto cells = K.cells();
  std::vector<Cell> stack{cells.front()};
  seen.insert({cells.front().i, cells.front().j});
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const Cell d{c.i + di, c.j + dj};
        if (K.test(d) && seen.insert({d.i, d.j}).second) stack.push_back(d);
      }
  }
  CHECK(seen.size() == K.count());
}

TEST_CASE("rasterize: capacity error") {
  PathSample p;
  p.points = {{0, 0}, {1000, 1000}};
  CHECK_THROWS_AS(rasterize_path(p, 1e-3, {0, 0}, 1'000'000), CapacityError);
}

TEST_CASE("frontier: filled disk") {
  const RasterSet K = from_predicate(0.01, 60, [](Point z) { return length(z) < 0.45; });
  const FrontierResult f = frontier(K);
  CHECK(f.hole_count == 0);
  CHECK(f.frontier_cells.count() == f.boundary_cell_count);
  std::size_t ring = 0;
  for (const Cell& c : K.cells()) ring += touches_complement(K, c) ? 1 : 0;
  CHECK(f.frontier_cells.count() == ring);
  for (const Cell& c : f.frontier_cells.cells()) {
    CHECK(touches_complement(K, c));
    // One cell thick: interior neighbours of a frontier cell are not all frontier.
    const Point p = K.cell_center(c);
    CHECK(length(p) > 0.45 - 2 * 0.01);
  }
}

TEST_CASE("frontier: annulus keeps the outer ring only") {
  const RasterSet K = from_predicate(0.01, 60, [](Point z) { return length(z) < 0.45 && length(z) > 0.25; });
  const FrontierResult f = frontier(K);
  CHECK(f.hole_count == 1);
  CHECK(f.frontier_cells.count() < f.boundary_cell_count);
  for (const Cell& c : f.frontier_cells.cells()) CHECK(length(K.cell_center(c)) > 0.4);
}

TEST_CASE("frontier: Brownian rasters") {
  int with_holes = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RasterSet K = rasterize_path(sample_bm(100000, 1e-5, seed), 2e-3);
    const FrontierResult f = frontier(K);
    CHECK(f.frontier_cells.count() <= f.boundary_cell_count);
    if (f.hole_count > 0) {
      ++with_holes;
      CHECK(f.frontier_cells.count() < f.boundary_cell_count);
    }
    for (const Cell& c : f.frontier_cells.cells()) {
      CHECK(K.test(c));
      CHECK(touches_complement(K, c));
    }
    // Determinism.
    CHECK(frontier(K).frontier_cells == f.frontier_cells);
  }
  CHECK(with_holes > 0);
}

TEST_CASE("frontier monotonicity along prefixes") {
  std::mt19937_64 rng(8);
  const PathSample p = sample_bm(50000, 2e-5, 77);
  const double eps = 2e-3;
  const Grid grid{eps, {0, 0}};
  std::size_t violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> u(1, p.steps());
    std::size_t t = u(rng), s = u(rng);
    if (t > s) std::swap(t, s);
    const FrontierResult fs = frontier(rasterize_path(prefix(p, s), eps));
    const FrontierResult ft = frontier(rasterize_path(prefix(p, t), eps));
    const std::vector<Point> tail(p.points.begin() + static_cast<std::ptrdiff_t>(t), p.points.begin() + static_cast<std::ptrdiff_t>(s) + 1);
    const RasterSet mid = RasterSet::from_list(rasterize_cells(tail, grid));
    for (const Cell& c : fs.frontier_cells.cells())
      if (!ft.frontier_cells.test(c) && !mid.test(c)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("eta_surrounds examples") {
  const TileAddress G{0, 0, 0};
  const double eta = 0.25;
  const double eps = 0.005;
  // core(G, 0.25) lies in the disk of radius 0.25 (circumradius 0.5); the ring
  // at 0.33 stays inside the inscribed disk.
  CHECK(golden::kInradius > 0.34);
  CHECK(eta_surrounds(circle_raster(0.33, eps), G, eta));

  PathSample far;
  far.points = {{5.0, 5.0}};
  CHECK_FALSE(eta_surrounds(rasterize_path(far, eps), G, eta));

  const std::vector<Point> radial{{0, 0}, {0.8, 0.1}};
  CHECK_FALSE(eta_surrounds(rasterize_polyline(radial, Grid{eps, {0, 0}}), G, eta));
}

TEST_CASE("eta_surrounds resolution check") {
  CHECK_THROWS_AS(eta_surrounds(circle_raster(0.33, 0.05), TileAddress{0, 0, 0}, 0.25), ResolutionError);
}

TEST_CASE("hits_core examples") {
  const TileAddress G{0, 0, 0};
  PathSample c;
  c.points = {{0.0, 0.0}};
  const RasterSet center = rasterize_path(c, 0.005);
  for (double eta : {0.01, 0.1, 0.3}) CHECK(hits_core(center, G, eta));
  PathSample far;
  far.points = {{3.0, -2.0}, {3.5, -2.0}};
  CHECK_FALSE(hits_core(rasterize_path(far, 0.005), G, 0.05));
}

TEST_CASE("hits_core agrees with a per-cell scan") {
  const TileAddress G{1, 1, 0};
  const double eta = 0.1;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PathSample p = sample_bm(4000, 2e-6, seed);
    for (Point& z : p.points) z = z + center(G) + Point{0.05 * ((seed % 3) - 1.0), 0.0};
    const RasterSet K = rasterize_path(p, 4e-4, center(G));
    bool brute = false;
    for (const Cell& cell : K.cells()) brute = brute || core_contains(G, eta, K.cell_center(cell));
    CHECK(hits_core(K, G, eta) == brute);
  }
}

TEST_CASE("surround and hit are monotone in K") {
  const TileAddress G{0, 0, 0};
  const double eta = 0.1, eps = 0.005;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point> a, b;
    for (int k = 0; k < 6; ++k) a.push_back({u(rng), u(rng)});
    b = a;
    for (int k = 0; k < 10; ++k) b.push_back({u(rng), u(rng)});
    const Grid grid{eps, {0, 0}};
    const RasterSet K1 = rasterize_polyline(a, grid);
    const RasterSet K2 = rasterize_polyline(b, grid);
    if (eta_surrounds(K1, G, eta)) CHECK(eta_surrounds(K2, G, eta));
    if (hits_core(K1, G, eta)) CHECK(hits_core(K2, G, eta));
  }
  // A ring is surrounded; adding more of the plane keeps it so.
  const RasterSet ring = circle_raster(0.33, eps);
  std::vector<Cell> more = ring.cells();
  for (const Cell& c : circle_raster(0.2, eps).cells()) more.push_back(c);
  CHECK(eta_surrounds(RasterSet::from_cells(ring.grid(), more), G, 0.25));
}

TEST_CASE("outer boundary on the lattice") {
  CHECK(outer_boundary_lattice(std::vector<LatticePoint>{{0, 0}}) == 1);
  for (int n : {2, 3, 5, 10}) {
    std::vector<LatticePoint> block;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) block.push_back({x, y});
    CHECK(outer_boundary_lattice(block) == static_cast<std::size_t>(4 * n - 4));
  }
  // A ring around an enclosed hole: the inner side does not count.
  std::vector<LatticePoint> ring;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      if (x == 0 || y == 0 || x == 4 || y == 4 || (x == 2 && y == 2)) ring.push_back({x, y});
  CHECK(outer_boundary_lattice(ring) == 16);
}

}  // TEST_SUITE
