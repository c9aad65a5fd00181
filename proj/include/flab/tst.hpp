#pragma once

// Jones beta numbers and traveling-salesman sums over finite planar samples.
//
// Sampling contract: a finite sample stands in for a continuum set E; sample
// spacing should be <= r/10 for every square or tile of diameter >= r that
// enters a sum.

#include <cstdint>
#include <span>
#include <vector>

#include "flab/exec.hpp"
#include "flab/gosper.hpp"
#include "flab/point.hpp"

namespace flab {

/// Half the minimal width of the convex hull of `points`, divided by diam_S.
/// Zero for <= 2 points or collinear points.
double beta(std::span<const Point> points, double diam_S);

/// Minimal width of the convex hull (rotating calipers); 0 when degenerate.
double min_width(std::span<const Point> points);
/// Largest pairwise distance.
double set_diameter(std::span<const Point> points);
std::vector<Point> convex_hull(std::span<const Point> points);

struct DyadicSquare {
  int level = 0;
  std::int64_t i = 0;
  std::int64_t k = 0;

  double side() const;
  double diam() const;
  auto operator<=>(const DyadicSquare&) const = default;
};

struct BetaEntry {
  DyadicSquare square;
  double beta = 0.0;   // beta_E(3 Q)
  double diam = 0.0;   // diam(Q), input units
};

struct BetaAtlas {
  std::vector<BetaEntry> entries;  // sorted by (level, i, k)
  double sum = 0.0;                // diam(E) + sum beta^2 diam(Q)
  double diam_E = 0.0;
  int j_max = 0;
};

struct TstOptions {
  std::size_t max_squares = 20'000'000;
  Exec exec = Exec::parallel;
};

/// All dyadic squares Q of levels 0..j_max (after scaling E into [0,1]^2)
/// whose 3Q meets E.
BetaAtlas tst_sum(std::span<const Point> E, int j_max, const TstOptions& opts = {});

enum class FloorVariant { squares, tiles };

/// diam(E) + sum of beta^2 diam over squares (or lambda^5 tile blow-ups) of
/// diameter >= r. A length floor up to an unknown universal constant.
double curve_length_floor(std::span<const Point> E, double r, FloorVariant variant = FloorVariant::squares);

struct TileLevels {
  int lo = 0;  // lambda^5 blow-ups of level-lo tiles are about 4 diam(E) or less
  int hi = 0;  // finest level with tile diameter >= r
};
TileLevels tile_floor_levels(double diam_E, double r);

/// Tiles of levels [n_lo, n_hi] whose lambda^5 blow-up contains a point of E.
std::vector<TileAddress> blowup_cover(std::span<const Point> E, int n_lo, int n_hi);

/// beta of E inside lambda^5 (.) G, relative to diam(lambda^5 (.) G).
double tile_beta(std::span<const Point> E, const TileAddress& G);

/// |lambda|^n (-gamma_len + sum_{G in xi} beta_U(lambda^5 G)^2 diam(G)), with U
/// sampled by tile centers and generation-1 boundary vertices.
double wiggliness_score(double gamma_len, std::span<const TileAddress> U, std::span<const TileAddress> xi, int n);
std::vector<Point> sample_tiles(std::span<const TileAddress> U);

}  // namespace flab
