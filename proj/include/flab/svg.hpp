#pragma once

// Minimal deterministic SVG output (fixed numeric formatting, no timestamps).

#include <string>
#include <vector>

#include "flab/gosper.hpp"
#include "flab/raster.hpp"

namespace flab {

struct ViewBox {
  double x0 = -1.0, y0 = -1.0, x1 = 1.0, y1 = 1.0;
};

class SvgWriter {
 public:
  SvgWriter(ViewBox view, double pixels = 800.0);

  void polygon(const std::vector<Point>& pts, const std::string& stroke, double stroke_width,
               const std::string& fill = "none");
  void polyline(const std::vector<Point>& pts, const std::string& stroke, double stroke_width);
  void rect(double x, double y, double w, double h, const std::string& fill);
  void circle(Point c, double r, const std::string& stroke, double stroke_width);
  /// Occupied cells as horizontal runs.
  void cells(const RasterSet& K, const std::string& fill);

  std::string str() const;

 private:
  ViewBox view_;
  double pixels_;
  std::string body_;
};

/// Tiles of the hierarchy over `view`, one polygon each; stroke width grows
/// with coarser level.
std::string tiling_svg(const std::vector<TileAddress>& tiles, int generation, ViewBox view);

/// Set in gray, frontier in black.
std::string frontier_svg(const RasterSet& K, const RasterSet& frontier_cells);

/// Whitney tiles filled by level over the set K.
std::string whitney_svg(const std::vector<TileAddress>& tiles, const RasterSet* K, ViewBox view,
                        int generation = 3);

/// Level-n tiles whose centers lie in the view, padded by one tile.
std::vector<TileAddress> tiles_in_view(int level, ViewBox view);

}  // namespace flab
