#pragma once

// Box-counting dimension of rasterized sets.

#include <vector>

#include "flab/exec.hpp"
#include "flab/fit.hpp"
#include "flab/raster.hpp"

namespace flab {

struct DimEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> scales;           // strictly decreasing
  std::vector<std::size_t> counts;      // N(eps)
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Number of eps-boxes (anchored at the grid origin) holding at least one
/// cell center of K.
std::size_t count_boxes(const CellList& K, double eps, Exec exec = Exec::parallel);

/// Slope of log N(eps) against log(1/eps). Needs >= 4 scales spanning >= 1.5
/// decades; DegenerateFitError when every N is equal.
DimEstimate box_dimension(const CellList& K, std::vector<double> eps_list, Exec exec = Exec::parallel);
DimEstimate box_dimension(const RasterSet& K, std::vector<double> eps_list, Exec exec = Exec::parallel);

/// Frontier cell counts of the path rasterized separately at each eps, fitted
/// as above. Every scale sees the frontier of its own eps-raster, so the
/// sub-step straightness of the polyline does not flatten the fine end.
DimEstimate frontier_dimension(const PathSample& path, std::vector<double> eps_list);

/// eps0 * 2^k for k = 0..count-1, returned in decreasing order.
std::vector<double> dyadic_scales(double eps0, int count);

}  // namespace flab
