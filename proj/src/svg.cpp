#include "flab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flab/error.hpp"

namespace flab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string points_attr(const std::vector<Point>& pts) {
  std::string s;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) s += ' ';
    s += num(pts[k].x);
    s += ',';
    s += num(-pts[k].y);
  }
  return s;
}

const char* kLevelColors[] = {"#08306b", "#2171b5", "#4292c6", "#6baed6", "#9ecae1",
                              "#c6dbef", "#fdd0a2", "#fdae6b", "#fd8d3c", "#e6550d"};

}  // namespace

SvgWriter::SvgWriter(ViewBox view, double pixels) : view_(view), pixels_(pixels) {}

void SvgWriter::polygon(const std::vector<Point>& pts, const std::string& stroke, double stroke_width,
                        const std::string& fill) {
  body_ += "<polygon points=\"" + points_attr(pts) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void SvgWriter::polyline(const std::vector<Point>& pts, const std::string& stroke, double stroke_width) {
  body_ += "<polyline points=\"" + points_attr(pts) + "\" fill=\"none\" stroke=\"" + stroke +
           "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void SvgWriter::rect(double x, double y, double w, double h, const std::string& fill) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(-(y + h)) + "\" width=\"" + num(w) + "\" height=\"" +
           num(h) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgWriter::circle(Point c, double r, const std::string& stroke, double stroke_width) {
  body_ += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"" + num(r) +
           "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void SvgWriter::cells(const RasterSet& K, const std::string& fill) {
  const CellBox& b = K.box();
  const double e = K.eps();
  for (std::int64_t j = b.j0; j <= b.j1; ++j) {
    std::int64_t i = b.i0;
    while (i <= b.i1) {
      if (!K.test({i, j})) {
        ++i;
        continue;
      }
      std::int64_t run = i;
      while (run <= b.i1 && K.test({run, j})) ++run;
      rect(K.origin().x + static_cast<double>(i) * e, K.origin().y + static_cast<double>(j) * e,
           static_cast<double>(run - i) * e, e, fill);
      i = run;
    }
  }
}

std::string SvgWriter::str() const {
  const double w = view_.x1 - view_.x0, h = view_.y1 - view_.y0;
  const double px_h = pixels_ * h / w;
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(pixels_) + "\" height=\"" + num(px_h) + "\" viewBox=\"" + num(view_.x0) + " " + num(-view_.y1) +
         " " + num(w) + " " + num(h) + "\">\n" + body_ + "</svg>\n";
}

std::vector<TileAddress> tiles_in_view(int level, ViewBox view) {
  const double pad = std::pow(gosper::kAbsLambda, -level);
  const TileFrame unit = TileFrame::of(TileAddress{level, 0, 0});
  double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
  for (const Point p : {Point{view.x0 - pad, view.y0 - pad}, Point{view.x1 + pad, view.y0 - pad},
                        Point{view.x0 - pad, view.y1 + pad}, Point{view.x1 + pad, view.y1 + pad}}) {
    const Complex w = to_complex(p) / unit.scale;
    const double b = w.imag() * 2.0 / gosper::kSqrt3;
    const double a = w.real() - 0.5 * b;
    amin = std::min(amin, a);
    amax = std::max(amax, a);
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
  }
  if ((amax - amin) * (bmax - bmin) > 4e6) throw CapacityError("too many tiles in view");
  std::vector<TileAddress> out;
  for (auto b = static_cast<std::int64_t>(std::floor(bmin)); b <= static_cast<std::int64_t>(std::ceil(bmax)); ++b)
    for (auto a = static_cast<std::int64_t>(std::floor(amin)); a <= static_cast<std::int64_t>(std::ceil(amax)); ++a) {
      const TileAddress t{level, a, b};
      const Point c = center(t);
      if (c.x >= view.x0 - pad && c.x <= view.x1 + pad && c.y >= view.y0 - pad && c.y <= view.y1 + pad) out.push_back(t);
    }
  return out;
}

std::string tiling_svg(const std::vector<TileAddress>& tiles, int generation, ViewBox view) {
  SvgWriter svg(view);
  const double span = view.x1 - view.x0;
  int lo = 0, hi = 0;
  if (!tiles.empty()) {
    lo = hi = tiles[0].level;
    for (const auto& t : tiles) {
      lo = std::min(lo, t.level);
      hi = std::max(hi, t.level);
    }
  }
  for (const TileAddress& t : tiles) {
    const double width = span * 1e-3 * (1.0 + (hi - t.level));
    svg.polygon(tile_polygon(TileFrame::of(t), generation), "black", width);
  }
  return svg.str();
}

std::string frontier_svg(const RasterSet& K, const RasterSet& frontier_cells) {
  const CellBox& b = K.box();
  const double e = K.eps();
  ViewBox v{K.origin().x + b.i0 * e - e, K.origin().y + b.j0 * e - e, K.origin().x + (b.i1 + 2) * e,
            K.origin().y + (b.j1 + 2) * e};
  SvgWriter svg(v);
  svg.cells(K, "#b0b0b0");
  svg.cells(frontier_cells, "#000000");
  return svg.str();
}

std::string whitney_svg(const std::vector<TileAddress>& tiles, const RasterSet* K, ViewBox view, int generation) {
  SvgWriter svg(view);
  for (const TileAddress& t : tiles) {
    const int idx = ((t.level % 10) + 10) % 10;
    svg.polygon(tile_polygon(TileFrame::of(t), generation), "#333333", (view.x1 - view.x0) * 5e-4,
                kLevelColors[idx]);
  }
  if (K) svg.cells(*K, "#000000");
  return svg.str();
}

}  // namespace flab
