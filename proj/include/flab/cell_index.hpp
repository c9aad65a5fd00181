#pragma once

// Sparse occupancy pyramid over a cell list. Answers "does any occupied cell
// center lie in this region" with disk pruning, without a dense bitmap over
// the bounding box.

#include <cstdint>
#include <vector>

#include "flab/gosper.hpp"
#include "flab/raster.hpp"

namespace flab {

class CellIndex {
 public:
  /// With dilate = true a cell counts as present when any cell of its 3x3
  /// neighbourhood is occupied (one-cell dilation of K).
  explicit CellIndex(const CellList& cells, bool dilate = false);
  explicit CellIndex(const RasterSet& raster, bool dilate = false) : CellIndex(raster.to_list(), dilate) {}

  const Grid& grid() const { return grid_; }
  bool dilated() const { return dilate_; }
  std::size_t size() const { return levels_.empty() ? 0 : levels_[0].size(); }
  bool empty() const { return size() == 0; }
  CellBox bbox() const { return box_; }

  /// Some (dilated) cell center lies inside the region.
  bool any_center_in(const Region& region) const;
  /// Some (undilated) cell center lies outside the region.
  bool any_center_outside(const Region& region) const;
  /// Some (dilated) cell center within distance `radius` of c.
  bool any_center_in_disk(Point c, double radius) const;

  bool occupied(Cell c) const;

 private:
  struct Block {
    int level;
    std::int64_t bi, bj;
  };
  std::uint64_t key(std::int64_t bi, std::int64_t bj) const {
    return (static_cast<std::uint64_t>(bj) << 32) | static_cast<std::uint64_t>(bi);
  }
  bool has(int level, std::int64_t bi, std::int64_t bj) const;
  template <typename Leaf, typename Prune>
  bool search(Leaf&& leaf, Prune&& prune) const;

  Grid grid_;
  bool dilate_ = false;
  CellBox box_;
  std::vector<std::vector<std::uint64_t>> levels_;  // sorted keys, offsets from box_ origin
};

}  // namespace flab
