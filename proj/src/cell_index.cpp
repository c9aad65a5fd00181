#include "flab/cell_index.hpp"

#include <algorithm>
#include <cmath>

#include "flab/error.hpp"

namespace flab {

CellIndex::CellIndex(const CellList& cells, bool dilate) : grid_(cells.grid), dilate_(dilate) {
  box_ = cells.bbox();
  if (box_.empty()) return;
  // One cell of slack on each side so dilated queries and offsets stay non-negative.
  const CellBox base{box_.i0 - 1, box_.j0 - 1, box_.i1 + 1, box_.j1 + 1};
  if (base.width() >= (std::int64_t{1} << 31) || base.height() >= (std::int64_t{1} << 31)) {
    throw CapacityError("cell index extent exceeds 2^31 cells per axis");
  }
  box_ = base;
  std::vector<std::uint64_t> keys;
  keys.reserve(cells.cells.size());
  for (const Cell& c : cells.cells) keys.push_back(key(c.i - box_.i0, c.j - box_.j0));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  levels_.push_back(std::move(keys));
  while (levels_.back().size() > 16) {
    std::vector<std::uint64_t> up;
    up.reserve(levels_.back().size() / 2);
    for (std::uint64_t k : levels_.back()) {
      const std::uint64_t bi = (k & 0xFFFFFFFFu) >> 1, bj = (k >> 32) >> 1;
      up.push_back(key(static_cast<std::int64_t>(bi), static_cast<std::int64_t>(bj)));
    }
    std::sort(up.begin(), up.end());
    up.erase(std::unique(up.begin(), up.end()), up.end());
    if (up.size() == levels_.back().size() && levels_.size() > 40) break;
    levels_.push_back(std::move(up));
  }
}

bool CellIndex::has(int level, std::int64_t bi, std::int64_t bj) const {
  if (bi < 0 || bj < 0) return false;
  const auto& v = levels_[static_cast<std::size_t>(level)];
  return std::binary_search(v.begin(), v.end(), key(bi, bj));
}

bool CellIndex::occupied(Cell c) const {
  if (empty()) return false;
  return has(0, c.i - box_.i0, c.j - box_.j0);
}

// Depth-first descent. prune(x0, y0, x1, y1) classifies the block's extent in
// cell-center space: 0 = skip, 1 = descend, 2 = accept. leaf(cell) decides a
// single occupied cell.
template <typename Leaf, typename Prune>
bool CellIndex::search(Leaf&& leaf, Prune&& prune) const {
  if (empty()) return false;
  const int top = static_cast<int>(levels_.size()) - 1;
  std::vector<Block> stack;
  for (std::uint64_t k : levels_[static_cast<std::size_t>(top)]) {
    stack.push_back({top, static_cast<std::int64_t>(k & 0xFFFFFFFFu), static_cast<std::int64_t>(k >> 32)});
  }
  const double pad = dilate_ ? 1.0 : 0.0;
  while (!stack.empty()) {
    const Block b = stack.back();
    stack.pop_back();
    const std::int64_t side = std::int64_t{1} << b.level;
    const std::int64_t ci0 = box_.i0 + b.bi * side, cj0 = box_.j0 + b.bj * side;
    const double e = grid_.eps;
    const double x0 = grid_.origin.x + (static_cast<double>(ci0) + 0.5 - pad) * e;
    const double y0 = grid_.origin.y + (static_cast<double>(cj0) + 0.5 - pad) * e;
    const double x1 = grid_.origin.x + (static_cast<double>(ci0 + side - 1) + 0.5 + pad) * e;
    const double y1 = grid_.origin.y + (static_cast<double>(cj0 + side - 1) + 0.5 + pad) * e;
    const int verdict = prune(x0, y0, x1, y1);
    if (verdict == 0) continue;
    if (verdict == 2) return true;
    if (b.level == 0) {
      if (leaf(Cell{ci0, cj0})) return true;
      continue;
    }
    for (int dj = 1; dj >= 0; --dj)
      for (int di = 1; di >= 0; --di) {
        const std::int64_t ni = 2 * b.bi + di, nj = 2 * b.bj + dj;
        if (has(b.level - 1, ni, nj)) stack.push_back({b.level - 1, ni, nj});
      }
  }
  return false;
}

namespace {

struct DiskBounds {
  double dmin, dmax;
};

DiskBounds box_distance(Point c, double x0, double y0, double x1, double y1) {
  const double dx = std::max({x0 - c.x, 0.0, c.x - x1});
  const double dy = std::max({y0 - c.y, 0.0, c.y - y1});
  const double fx = std::max(std::abs(c.x - x0), std::abs(c.x - x1));
  const double fy = std::max(std::abs(c.y - y0), std::abs(c.y - y1));
  return {std::hypot(dx, dy), std::hypot(fx, fy)};
}

}  // namespace

bool CellIndex::any_center_in(const Region& region) const {
  const Point c = region.center();
  const double rc = region.circumradius() * (1.0 + 1e-9) + 1e-12;
  const double ri = region.inradius() * (1.0 - 1e-9);
  auto prune = [&](double x0, double y0, double x1, double y1) {
    const DiskBounds d = box_distance(c, x0, y0, x1, y1);
    if (d.dmin > rc) return 0;
    if (d.dmax < ri) return 2;
    return 1;
  };
  auto leaf = [&](Cell cell) {
    if (!dilate_) return region.contains(grid_.cell_center(cell));
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const Point p = grid_.cell_center({cell.i + di, cell.j + dj});
        if (distance(p, c) <= rc && region.contains(p)) return true;
      }
    return false;
  };
  return search(leaf, prune);
}

bool CellIndex::any_center_outside(const Region& region) const {
  const Point c = region.center();
  const double rc = region.circumradius() * (1.0 + 1e-9) + 1e-12;
  const double ri = region.inradius() * (1.0 - 1e-9);
  const bool d = dilate_;
  auto prune = [&](double x0, double y0, double x1, double y1) {
    // The extent here may include dilation padding; shrink it back.
    const double p = d ? grid_.eps : 0.0;
    const DiskBounds b = box_distance(c, x0 + p, y0 + p, x1 - p, y1 - p);
    if (b.dmax < ri) return 0;
    if (b.dmin > rc) return 2;
    return 1;
  };
  auto leaf = [&](Cell cell) { return !region.contains(grid_.cell_center(cell)); };
  return search(leaf, prune);
}

bool CellIndex::any_center_in_disk(Point c, double radius) const {
  auto prune = [&](double x0, double y0, double x1, double y1) {
    const DiskBounds d = box_distance(c, x0, y0, x1, y1);
    if (d.dmin > radius) return 0;
    if (d.dmax <= radius) return 2;
    return 1;
  };
  auto leaf = [&](Cell cell) {
    if (!dilate_) return distance(grid_.cell_center(cell), c) <= radius;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        if (distance(grid_.cell_center({cell.i + di, cell.j + dj}), c) <= radius) return true;
    return false;
  };
  return search(leaf, prune);
}

}  // namespace flab
