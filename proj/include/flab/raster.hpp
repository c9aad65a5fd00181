#pragma once

// Rasterized compact sets on a globally anchored square grid: cell (i, j)
// covers origin + [i*eps, (i+1)*eps) x [j*eps, (j+1)*eps). Two rasters with
// the same origin and eps share cells, so unions and prefix comparisons are exact.
//
// Connectivity: the set is 8-connected, its complement 4-connected.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "flab/gosper.hpp"
#include "flab/point.hpp"

namespace flab {

struct Cell {
  std::int64_t i = 0;
  std::int64_t j = 0;

  bool operator==(const Cell&) const = default;
  /// Row-major order (j first), the order cells() and cell lists use.
  bool operator<(const Cell& o) const { return j != o.j ? j < o.j : i < o.i; }
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    const std::uint64_t h = static_cast<std::uint64_t>(c.i) * 0x9E3779B97F4A7C15ull ^
                            (static_cast<std::uint64_t>(c.j) + 0x632BE59BD9B4E019ull) * 0xC2B2AE3D27D4EB4Full;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

/// Inclusive integer extents.
struct CellBox {
  std::int64_t i0 = 0, j0 = 0, i1 = -1, j1 = -1;

  bool empty() const { return i1 < i0 || j1 < j0; }
  std::int64_t width() const { return empty() ? 0 : i1 - i0 + 1; }
  std::int64_t height() const { return empty() ? 0 : j1 - j0 + 1; }
  std::uint64_t area() const { return static_cast<std::uint64_t>(width()) * static_cast<std::uint64_t>(height()); }
  bool contains(Cell c) const { return c.i >= i0 && c.i <= i1 && c.j >= j0 && c.j <= j1; }
  void include(Cell c);
  bool operator==(const CellBox&) const = default;
};

inline constexpr std::uint64_t kDefaultMaxCells = std::uint64_t{1} << 28;

struct Grid {
  double eps = 1.0;
  Point origin{0.0, 0.0};

  Cell cell_of(Point p) const;
  Point cell_center(Cell c) const;
  /// Cell coordinates as reals: (p - origin) / eps.
  Point to_cell_space(Point p) const { return (p - origin) * (1.0 / eps); }
};

/// Sorted, duplicate-free list of occupied cells. Used where a dense bitmap
/// over the bounding box would not fit.
struct CellList {
  Grid grid;
  std::vector<Cell> cells;

  void normalize();  // sort + unique
  CellBox bbox() const;
};

class RasterSet {
 public:
  RasterSet() = default;
  /// Empty bitmap over `box` (box is trimmed to the occupied extent by trim()).
  RasterSet(Grid grid, CellBox box, std::uint64_t max_cells = kDefaultMaxCells);

  static RasterSet from_cells(Grid grid, std::span<const Cell> cells,
                              std::uint64_t max_cells = kDefaultMaxCells);
  static RasterSet from_list(const CellList& list, std::uint64_t max_cells = kDefaultMaxCells) {
    return from_cells(list.grid, list.cells, max_cells);
  }

  const Grid& grid() const { return grid_; }
  double eps() const { return grid_.eps; }
  Point origin() const { return grid_.origin; }
  /// Extent of the bitmap; equals the occupied bbox after construction via factories.
  const CellBox& box() const { return box_; }
  CellBox bbox() const;

  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }

  bool test(Cell c) const {
    return box_.contains(c) && bits_[index(c)] != 0;
  }
  void set(Cell c);
  void trim();

  std::vector<Cell> cells() const;
  CellList to_list() const { return {grid_, cells()}; }
  Point cell_center(Cell c) const { return grid_.cell_center(c); }
  Cell cell_of(Point p) const { return grid_.cell_of(p); }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.j - box_.j0) * static_cast<std::size_t>(box_.width()) +
           static_cast<std::size_t>(c.i - box_.i0);
  }

  bool operator==(const RasterSet& o) const;

 private:
  Grid grid_;
  CellBox box_;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// Visits the conservative supercover of segment [a, b] in cell space: every
/// cell the closed segment touches, including both side cells at exact corner
/// crossings.
void supercover(Point a, Point b, const Grid& grid, const std::function<void(Cell)>& visit);

/// Cells touched by the polyline through `points` (closed adds the last->first edge).
CellList rasterize_cells(std::span<const Point> points, const Grid& grid, bool closed = false);
/// Same, keeping only cells inside `window`.
CellList rasterize_cells(std::span<const Point> points, const Grid& grid, const CellBox& window,
                         bool closed = false);

struct PathSample;
/// Dense raster of a sampled path; CapacityError if the bbox exceeds max_cells.
RasterSet rasterize_path(const PathSample& path, double eps, Point origin = {0.0, 0.0},
                         std::uint64_t max_cells = kDefaultMaxCells);
RasterSet rasterize_polyline(std::span<const Point> points, const Grid& grid, bool closed = false,
                             std::uint64_t max_cells = kDefaultMaxCells);

struct FrontierResult {
  RasterSet frontier_cells;
  int unbounded_component_label = 0;  // complement component 0 is the exterior
  int hole_count = 0;
  std::size_t boundary_cell_count = 0;  // occupied cells 4-adjacent to any complement cell
};

/// Frontier of K: occupied cells 4-adjacent to the unbounded complement component.
FrontierResult frontier(const RasterSet& K);

/// eps <= eta * diam(G) / 8 is required; otherwise ResolutionError.
void check_surround_resolution(double eps, double eta, double tile_diameter);

/// K cap G separates core(G, eta) from the complement of G.
bool eta_surrounds(const RasterSet& K, const TileFrame& tile, double eta);
bool eta_surrounds(const RasterSet& K, const TileAddress& tile, double eta);

/// Some occupied cell center lies in core(G, eta).
bool hits_core(const RasterSet& K, const TileFrame& tile, double eta);
bool hits_core(const RasterSet& K, const TileAddress& tile, double eta);

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  bool operator==(const LatticePoint&) const = default;
};

/// Number of points of S that are 4-adjacent to the unbounded component of Z^2 \ S.
std::size_t outer_boundary_lattice(std::span<const LatticePoint> S);

}  // namespace flab
