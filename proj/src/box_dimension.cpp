#include "flab/box_dimension.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "flab/error.hpp"
#include "flab/paths.hpp"

namespace flab {

namespace {

Cell box_of(const Grid& g, Cell c, double eps) {
  const double x = (static_cast<double>(c.i) + 0.5) * g.eps / eps;
  const double y = (static_cast<double>(c.j) + 0.5) * g.eps / eps;
  return {static_cast<std::int64_t>(std::floor(x)), static_cast<std::int64_t>(std::floor(y))};
}

// Reference: collect every box key, sort, count distinct.
std::size_t count_serial(const CellList& K, double eps) {
  std::vector<Cell> boxes;
  boxes.reserve(K.cells.size());
  for (const Cell& c : K.cells) boxes.push_back(box_of(K.grid, c, eps));
  std::sort(boxes.begin(), boxes.end());
  return static_cast<std::size_t>(std::unique(boxes.begin(), boxes.end()) - boxes.begin());
}

// Cells are sorted by row, so each box row is a contiguous run of cell rows.
// Threads take box rows and mark columns in a private bitmap.
std::size_t count_parallel(const CellList& K, double eps) {
  const auto& cells = K.cells;
  if (cells.empty()) return 0;
  std::vector<std::size_t> row_start;  // first cell index of each distinct box row
  std::vector<std::int64_t> row_key;
  std::int64_t imin = INT64_MAX, imax = INT64_MIN;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell b = box_of(K.grid, cells[k], eps);
    if (row_key.empty() || row_key.back() != b.j) {
      row_key.push_back(b.j);
      row_start.push_back(k);
    }
    imin = std::min(imin, b.i);
    imax = std::max(imax, b.i);
  }
  row_start.push_back(cells.size());
  const auto rows = static_cast<std::int64_t>(row_key.size());
  const auto width = static_cast<std::size_t>(imax - imin + 1);
  std::size_t total = 0;
#pragma omp parallel reduction(+ : total)
  {
    std::vector<std::uint8_t> mark(width, 0);
    std::vector<std::size_t> touched;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t r = 0; r < rows; ++r) {
      for (std::size_t k = row_start[static_cast<std::size_t>(r)]; k < row_start[static_cast<std::size_t>(r) + 1]; ++k) {
        const auto col = static_cast<std::size_t>(box_of(K.grid, cells[k], eps).i - imin);
        if (!mark[col]) {
          mark[col] = 1;
          touched.push_back(col);
        }
      }
      total += touched.size();
      for (std::size_t col : touched) mark[col] = 0;
      touched.clear();
    }
  }
  return total;
}

}  // namespace

std::size_t count_boxes(const CellList& K, double eps, Exec exec) {
  if (!(eps > 0.0)) throw InvalidArgument("box size must be positive");
  if (exec == Exec::serial) return count_serial(K, eps);
  if (std::is_sorted(K.cells.begin(), K.cells.end())) return count_parallel(K, eps);
  CellList sorted = K;
  sorted.normalize();
  return count_parallel(sorted, eps);
}

namespace {

std::vector<double> checked_scales(std::vector<double> eps_list) {
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());
  if (eps_list.size() < 4) throw InvalidArgument("box_dimension needs at least 4 scales");
  if (!(eps_list.back() > 0.0)) throw InvalidArgument("box sizes must be positive");
  if (std::log10(eps_list.front() / eps_list.back()) < 1.5 - 1e-12) {
    throw InvalidArgument("box_dimension scales must span at least 1.5 decades");
  }
  return eps_list;
}

DimEstimate fit_counts(std::vector<double> scales, std::vector<std::size_t> counts) {
  DimEstimate d;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (counts[k] == 0) throw DegenerateFitError("empty box count");
    x.push_back(std::log(1.0 / scales[k]));
    y.push_back(std::log(static_cast<double>(counts[k])));
  }
  const LineFit f = fit_line(x, y);
  d.slope = f.slope;
  d.intercept = f.intercept;
  d.r2 = f.r2;
  d.ci_lo = f.ci_lo;
  d.ci_hi = f.ci_hi;
  d.scales = std::move(scales);
  d.counts = std::move(counts);
  return d;
}

}  // namespace

DimEstimate box_dimension(const CellList& K, std::vector<double> eps_list, Exec exec) {
  if (K.cells.empty()) throw InvalidArgument("box_dimension of an empty set");
  eps_list = checked_scales(std::move(eps_list));
  std::vector<std::size_t> counts;
  for (double e : eps_list) counts.push_back(count_boxes(K, e, exec));
  return fit_counts(std::move(eps_list), std::move(counts));
}

DimEstimate frontier_dimension(const PathSample& path, std::vector<double> eps_list) {
  if (path.points.empty()) throw InvalidArgument("frontier_dimension of an empty path");
  eps_list = checked_scales(std::move(eps_list));
  std::vector<std::size_t> counts(eps_list.size());
  for (std::size_t k = 0; k < eps_list.size(); ++k)
    counts[k] = frontier(rasterize_path(path, eps_list[k])).frontier_cells.count();
  return fit_counts(std::move(eps_list), std::move(counts));
}

DimEstimate box_dimension(const RasterSet& K, std::vector<double> eps_list, Exec exec) {
  return box_dimension(K.to_list(), std::move(eps_list), exec);
}

std::vector<double> dyadic_scales(double eps0, int count) {
  std::vector<double> out;
  for (int k = count - 1; k >= 0; --k) out.push_back(eps0 * std::ldexp(1.0, k));
  return out;
}

}  // namespace flab
