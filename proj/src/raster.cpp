#include "flab/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flab/error.hpp"
#include "flab/paths.hpp"

namespace flab {

void CellBox::include(Cell c) {
  if (empty()) {
    i0 = i1 = c.i;
    j0 = j1 = c.j;
    return;
  }
  i0 = std::min(i0, c.i);
  i1 = std::max(i1, c.i);
  j0 = std::min(j0, c.j);
  j1 = std::max(j1, c.j);
}

Cell Grid::cell_of(Point p) const {
  const Point u = to_cell_space(p);
  return {static_cast<std::int64_t>(std::floor(u.x)), static_cast<std::int64_t>(std::floor(u.y))};
}

Point Grid::cell_center(Cell c) const {
  return {origin.x + (static_cast<double>(c.i) + 0.5) * eps, origin.y + (static_cast<double>(c.j) + 0.5) * eps};
}

void CellList::normalize() {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

CellBox CellList::bbox() const {
  CellBox b;
  for (const Cell& c : cells) b.include(c);
  return b;
}

RasterSet::RasterSet(Grid grid, CellBox box, std::uint64_t max_cells) : grid_(grid), box_(box) {
  if (!(grid.eps > 0.0)) throw InvalidArgument("raster cell size must be positive");
  if (box.area() > max_cells) {
    throw CapacityError("raster of " + std::to_string(box.width()) + "x" + std::to_string(box.height()) +
                        " cells exceeds the limit of " + std::to_string(max_cells));
  }
  bits_.assign(box.area(), 0);
}

RasterSet RasterSet::from_cells(Grid grid, std::span<const Cell> cells, std::uint64_t max_cells) {
  CellBox box;
  for (const Cell& c : cells) box.include(c);
  RasterSet r(grid, box, max_cells);
  for (const Cell& c : cells) r.set(c);
  return r;
}

void RasterSet::set(Cell c) {
  if (!box_.contains(c)) throw InvalidArgument("cell outside raster extent");
  std::uint8_t& b = bits_[index(c)];
  if (b == 0) {
    b = 1;
    ++count_;
  }
}

CellBox RasterSet::bbox() const {
  CellBox b;
  const std::int64_t w = box_.width();
  for (std::int64_t j = box_.j0; j <= box_.j1; ++j) {
    const std::uint8_t* row = bits_.data() + static_cast<std::size_t>(j - box_.j0) * w;
    for (std::int64_t i = 0; i < w; ++i) {
      if (row[i]) b.include({box_.i0 + i, j});
    }
  }
  return b;
}

void RasterSet::trim() {
  const CellBox b = bbox();
  if (b == box_) return;
  std::vector<std::uint8_t> out(b.area(), 0);
  for (std::int64_t j = b.j0; j <= b.j1; ++j) {
    for (std::int64_t i = b.i0; i <= b.i1; ++i) {
      out[static_cast<std::size_t>(j - b.j0) * b.width() + (i - b.i0)] = bits_[index({i, j})];
    }
  }
  box_ = b;
  bits_ = std::move(out);
}

std::vector<Cell> RasterSet::cells() const {
  std::vector<Cell> out;
  out.reserve(count_);
  const std::int64_t w = box_.width();
  for (std::int64_t j = box_.j0; j <= box_.j1; ++j) {
    const std::uint8_t* row = bits_.data() + static_cast<std::size_t>(j - box_.j0) * w;
    for (std::int64_t i = 0; i < w; ++i) {
      if (row[i]) out.push_back({box_.i0 + i, j});
    }
  }
  return out;
}

bool RasterSet::operator==(const RasterSet& o) const {
  return grid_.eps == o.grid_.eps && grid_.origin == o.grid_.origin && cells() == o.cells();
}

void supercover(Point a, Point b, const Grid& grid, const std::function<void(Cell)>& visit) {
  const Point u = grid.to_cell_space(a);
  const Point v = grid.to_cell_space(b);
  std::int64_t i = static_cast<std::int64_t>(std::floor(u.x));
  std::int64_t j = static_cast<std::int64_t>(std::floor(u.y));
  const std::int64_t ie = static_cast<std::int64_t>(std::floor(v.x));
  const std::int64_t je = static_cast<std::int64_t>(std::floor(v.y));
  visit({i, j});

  const double dx = v.x - u.x;
  const double dy = v.y - u.y;
  const int sx = ie > i ? 1 : (ie < i ? -1 : 0);
  const int sy = je > j ? 1 : (je < j ? -1 : 0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double tdx = sx != 0 ? 1.0 / std::abs(dx) : inf;
  const double tdy = sy != 0 ? 1.0 / std::abs(dy) : inf;
  double tmx = sx > 0 ? (static_cast<double>(i + 1) - u.x) / dx
                      : (sx < 0 ? (u.x - static_cast<double>(i)) / -dx : inf);
  double tmy = sy > 0 ? (static_cast<double>(j + 1) - u.y) / dy
                      : (sy < 0 ? (u.y - static_cast<double>(j)) / -dy : inf);
  std::int64_t nx = std::abs(ie - i);
  std::int64_t ny = std::abs(je - j);

  while (nx + ny > 0) {
    const bool corner = nx > 0 && ny > 0 && tmx == tmy;
    if (corner) {
      visit({i + sx, j});
      visit({i, j + sy});
      i += sx;
      j += sy;
      tmx += tdx;
      tmy += tdy;
      --nx;
      --ny;
    } else if (ny == 0 || (nx > 0 && tmx < tmy)) {
      i += sx;
      tmx += tdx;
      --nx;
    } else {
      j += sy;
      tmy += tdy;
      --ny;
    }
    visit({i, j});
  }
}

namespace {

template <typename Sink>
void walk_polyline(std::span<const Point> points, const Grid& grid, bool closed, Sink&& sink) {
  if (points.empty()) throw InvalidArgument("polyline needs at least one point");
  const std::function<void(Cell)> fn = sink;
  if (points.size() == 1) {
    fn(grid.cell_of(points[0]));
    return;
  }
  for (std::size_t k = 0; k + 1 < points.size(); ++k) supercover(points[k], points[k + 1], grid, fn);
  if (closed) supercover(points.back(), points.front(), grid, fn);
}

}  // namespace

CellList rasterize_cells(std::span<const Point> points, const Grid& grid, bool closed) {
  CellList out{grid, {}};
  walk_polyline(points, grid, closed, [&](Cell c) { out.cells.push_back(c); });
  out.normalize();
  return out;
}

CellList rasterize_cells(std::span<const Point> points, const Grid& grid, const CellBox& window,
                         bool closed) {
  CellList out{grid, {}};
  if (points.empty()) throw InvalidArgument("polyline needs at least one point");
  // Segments whose cell bbox misses the window are skipped without traversal.
  auto seg_hits = [&](Point a, Point b) {
    const Cell ca = grid.cell_of(a), cb = grid.cell_of(b);
    return std::max(ca.i, cb.i) >= window.i0 && std::min(ca.i, cb.i) <= window.i1 &&
           std::max(ca.j, cb.j) >= window.j0 && std::min(ca.j, cb.j) <= window.j1;
  };
  const std::function<void(Cell)> keep = [&](Cell c) {
    if (window.contains(c)) out.cells.push_back(c);
  };
  if (points.size() == 1) keep(grid.cell_of(points[0]));
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (seg_hits(points[k], points[k + 1])) supercover(points[k], points[k + 1], grid, keep);
  }
  if (closed && points.size() > 1 && seg_hits(points.back(), points.front())) {
    supercover(points.back(), points.front(), grid, keep);
  }
  out.normalize();
  return out;
}

RasterSet rasterize_polyline(std::span<const Point> points, const Grid& grid, bool closed,
                             std::uint64_t max_cells) {
  if (points.empty()) throw InvalidArgument("polyline needs at least one point");
  if (!(grid.eps > 0.0)) throw InvalidArgument("raster cell size must be positive");
  CellBox box;
  for (const Point& p : points) box.include(grid.cell_of(p));
  RasterSet r(grid, box, max_cells);
  walk_polyline(points, grid, closed, [&](Cell c) { r.set(c); });
  return r;
}

RasterSet rasterize_path(const PathSample& path, double eps, Point origin, std::uint64_t max_cells) {
  return rasterize_polyline(path.points, Grid{eps, origin}, false, max_cells);
}

// ---------------------------------------------------------------------------

namespace {

// Complement labels on a grid padded by one cell: -1 = set, 0 = exterior,
// k >= 1 = k-th bounded component. Components are 4-connected.
struct Labels {
  std::int64_t w = 0, h = 0;
  std::vector<std::int32_t> lab;
  int components = 0;
};

Labels label_complement(const RasterSet& K) {
  const CellBox& b = K.box();
  Labels L;
  L.w = b.width() + 2;
  L.h = b.height() + 2;
  L.lab.assign(static_cast<std::size_t>(L.w * L.h), std::numeric_limits<std::int32_t>::max());
  const auto& bits = K.bits();
  for (std::int64_t j = 0; j < b.height(); ++j)
    for (std::int64_t i = 0; i < b.width(); ++i)
      if (bits[static_cast<std::size_t>(j * b.width() + i)]) L.lab[static_cast<std::size_t>((j + 1) * L.w + i + 1)] = -1;

  constexpr std::int32_t unseen = std::numeric_limits<std::int32_t>::max();
  std::vector<std::int64_t> stack;
  auto fill = [&](std::int64_t start, std::int32_t label) {
    stack.clear();
    stack.push_back(start);
    L.lab[static_cast<std::size_t>(start)] = label;
    while (!stack.empty()) {
      const std::int64_t p = stack.back();
      stack.pop_back();
      const std::int64_t x = p % L.w, y = p / L.w;
      const std::int64_t nb[4] = {x > 0 ? p - 1 : -1, x + 1 < L.w ? p + 1 : -1, y > 0 ? p - L.w : -1,
                                  y + 1 < L.h ? p + L.w : -1};
      for (std::int64_t q : nb) {
        if (q >= 0 && L.lab[static_cast<std::size_t>(q)] == unseen) {
          L.lab[static_cast<std::size_t>(q)] = label;
          stack.push_back(q);
        }
      }
    }
  };
  fill(0, 0);
  std::int32_t next = 1;
  for (std::int64_t p = 0; p < L.w * L.h; ++p) {
    if (L.lab[static_cast<std::size_t>(p)] == unseen) fill(p, next++);
  }
  L.components = next - 1;
  return L;
}

}  // namespace

FrontierResult frontier(const RasterSet& K) {
  if (K.empty()) throw InvalidArgument("frontier of an empty set");
  const Labels L = label_complement(K);
  const CellBox& b = K.box();
  RasterSet front(K.grid(), b);
  std::size_t boundary = 0;
  for (std::int64_t y = 1; y + 1 < L.h; ++y) {
    for (std::int64_t x = 1; x + 1 < L.w; ++x) {
      const std::int64_t p = y * L.w + x;
      if (L.lab[static_cast<std::size_t>(p)] != -1) continue;
      const std::int32_t n4[4] = {L.lab[static_cast<std::size_t>(p - 1)], L.lab[static_cast<std::size_t>(p + 1)],
                                  L.lab[static_cast<std::size_t>(p - L.w)], L.lab[static_cast<std::size_t>(p + L.w)]};
      bool any = false, outer = false;
      for (std::int32_t l : n4) {
        any |= l >= 0;
        outer |= l == 0;
      }
      if (any) ++boundary;
      if (outer) front.set({b.i0 + x - 1, b.j0 + y - 1});
    }
  }
  front.trim();
  return {std::move(front), 0, L.components, boundary};
}

void check_surround_resolution(double eps, double eta, double tile_diameter) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  if (eps > eta * tile_diameter / 8.0 * (1.0 + 1e-12)) {
    throw ResolutionError("cell size " + std::to_string(eps) + " exceeds eta*diam/8 = " +
                          std::to_string(eta * tile_diameter / 8.0));
  }
}

namespace {

CellBox tile_window(const Grid& grid, const TileFrame& tile, double pad_cells) {
  const double r = tile.circumradius() + pad_cells * grid.eps;
  const Point c = tile.center_point();
  const Cell lo = grid.cell_of({c.x - r, c.y - r});
  const Cell hi = grid.cell_of({c.x + r, c.y + r});
  return {lo.i, lo.j, hi.i, hi.j};
}

constexpr int kDepthGeneration = 7;

}  // namespace

bool eta_surrounds(const RasterSet& K, const TileFrame& tile, double eta) {
  const double diam = tile.diameter();
  check_surround_resolution(K.eps(), eta, diam);
  const Grid& grid = K.grid();
  const CellBox win = tile_window(grid, tile, 2.0);
  const int g = gosper::generation_for(diam, 0.5 * grid.eps);
  const std::int64_t w = win.width(), h = win.height();
  const std::size_t n = static_cast<std::size_t>(w * h);

  // 0 = free outside tile, 1 = free inside tile, 2 = blocked (K inside tile)
  std::vector<std::uint8_t> kind(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const Cell c{win.i0 + x, win.j0 + y};
      const bool inside = raw_tile_contains(tile.to_raw(grid.cell_center(c)), g);
      kind[static_cast<std::size_t>(y * w + x)] = inside ? (K.test(c) ? 2 : 1) : 0;
    }
  }
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::int64_t> stack;
  for (std::size_t p = 0; p < n; ++p) {
    if (kind[p] == 0) {
      seen[p] = 1;
      stack.push_back(static_cast<std::int64_t>(p));
    }
  }
  const double need = eta * diam;
  while (!stack.empty()) {
    const std::int64_t p = stack.back();
    stack.pop_back();
    if (kind[static_cast<std::size_t>(p)] == 1) {
      const Cell c{win.i0 + p % w, win.j0 + p / w};
      if (depth(tile, grid.cell_center(c), kDepthGeneration) > need) return false;
    }
    const std::int64_t x = p % w, y = p / w;
    const std::int64_t nb[4] = {x > 0 ? p - 1 : -1, x + 1 < w ? p + 1 : -1, y > 0 ? p - w : -1,
                                y + 1 < h ? p + w : -1};
    for (std::int64_t q : nb) {
      if (q < 0) continue;
      const auto qi = static_cast<std::size_t>(q);
      if (!seen[qi] && kind[qi] != 2) {
        seen[qi] = 1;
        stack.push_back(q);
      }
    }
  }
  return true;
}

bool eta_surrounds(const RasterSet& K, const TileAddress& tile, double eta) {
  return eta_surrounds(K, TileFrame::of(tile), eta);
}

bool hits_core(const RasterSet& K, const TileFrame& tile, double eta) {
  if (K.empty()) return false;
  const Grid& grid = K.grid();
  CellBox win = tile_window(grid, tile, 1.0);
  const CellBox& kb = K.box();
  win = {std::max(win.i0, kb.i0), std::max(win.j0, kb.j0), std::min(win.i1, kb.i1), std::min(win.j1, kb.j1)};
  const double need = eta * tile.diameter();
  for (std::int64_t j = win.j0; j <= win.j1; ++j) {
    for (std::int64_t i = win.i0; i <= win.i1; ++i) {
      if (K.test({i, j}) && depth(tile, grid.cell_center({i, j}), kDepthGeneration) > need) return true;
    }
  }
  return false;
}

bool hits_core(const RasterSet& K, const TileAddress& tile, double eta) {
  return hits_core(K, TileFrame::of(tile), eta);
}

std::size_t outer_boundary_lattice(std::span<const LatticePoint> S) {
  if (S.empty()) throw InvalidArgument("outer boundary of an empty lattice set");
  std::vector<Cell> cells;
  cells.reserve(S.size());
  for (const LatticePoint& p : S) cells.push_back({p.x, p.y});
  const RasterSet R = RasterSet::from_cells(Grid{1.0, {0.0, 0.0}}, cells);
  return frontier(R).frontier_cells.count();
}

}  // namespace flab
