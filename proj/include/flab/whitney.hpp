#pragma once

// Whitney tiles of the complement of a rasterized compact set K over the
// Gosper hierarchy, Whitney chains and walls, and the pruned tree T(K, G*, h).
//
// A tile G is a Whitney tile when lambda (.) G misses K and lambda (.) parent(G)
// meets K. lambda^k (.) G rotates as well as expands about the tile center
// (see lambda_blow_up). Intersections with K use K dilated by one raster cell.

#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "flab/cell_index.hpp"
#include "flab/gosper.hpp"

namespace flab {

struct Disk {
  Point center;
  double radius = 0.0;
};

struct WhitneyOptions {
  /// Keep only tiles whose lambda^5 blow-up meets this disk.
  std::optional<Disk> roi;
  std::size_t max_tiles = 4'000'000;  // per level, CapacityError beyond
};

struct WhitneyDecomposition {
  std::vector<TileAddress> tiles;  // sorted
  std::unordered_set<TileAddress, TileAddressHash> index;
  int n_min = 0;
  int n_max = 0;
  std::shared_ptr<const CellIndex> source;
  std::optional<Disk> roi;

  bool contains(const TileAddress& t) const { return index.count(t) != 0; }
  std::vector<TileAddress> at_level(int n) const;
};

/// Diameter ratio |lambda|^k of a lambda^k blow-up.
double blowup_factor(int k);

/// lambda^k (.) tile meets K (dilated per the index).
bool blowup_hits(const CellIndex& K, const TileAddress& tile, int k);

/// Whitney tiles with level in [n_min, n_max]. ResolutionError when
/// |lambda|^{-n_max} < 4 eps.
WhitneyDecomposition whitney_tiles(std::shared_ptr<const CellIndex> K, int n_min, int n_max,
                                   const WhitneyOptions& opts = {});

/// Whitney tiles sharing boundary with `tile` (any level), found through
/// same-level neighbours, their ancestors and their descendants.
std::vector<TileAddress> adjacent_tiles(const WhitneyDecomposition& W, const TileAddress& tile);

struct LevelGapReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;  // pairs with |level difference| > 1
  int max_gap = 0;
};
LevelGapReport level_gaps(const WhitneyDecomposition& W);

/// The closed tile lies inside the region, judged from its center and the
/// vertices of its generation-g boundary polygon.
bool tile_inside(const TileAddress& tile, const Region& region, int generation = 3);

/// Two blown-up regions are disjoint, judged by circumdisks, indisks and
/// generation-g boundary vertices of each tested against the other. Only
/// reliable when the regions are well separated or clearly overlapping; for
/// lattice blow-ups blowups_meet is exact.
bool regions_disjoint(const Region& a, const Region& b, int generation = 4);

/// W_K^G: tiles reachable from G by chains of adjacent Whitney tiles with
/// nondecreasing level inside lambda^5 (.) G. Stops after max_tiles visits
/// (the result is then flagged incomplete).
struct ChainComponent {
  std::vector<TileAddress> tiles;  // sorted
  bool complete = true;
};
ChainComponent chain_component(const WhitneyDecomposition& W, const TileAddress& G,
                               std::size_t max_tiles = 2'000'000);

/// Level-n slice of the chain component.
std::vector<TileAddress> wall(const WhitneyDecomposition& W, const TileAddress& G, int n);
std::vector<TileAddress> wall(const ChainComponent& C, int n);

/// Raster check that wall(G, n) together with the boundary of lambda^5 (.) G
/// separates G from K: flood fill from G's cells inside the blow-up, blocked by
/// wall cells, never reaches a K cell.
bool wall_separates(const WhitneyDecomposition& W, const TileAddress& G, int n, double eps);

struct TreeNode {
  TileAddress tile;
  int parent = -1;             // index into the previous generation
  std::size_t candidates = 0;  // |T~| for this node's children
  std::size_t children = 0;    // |T|
};

struct WhitneyTree {
  TileAddress root;
  int h = 4;
  std::vector<std::vector<TreeNode>> generations;
  /// Diagnostic: a larger Whitney tile outside lambda^5 (.) G* chains to G*.
  std::optional<bool> root_hypothesis;

  std::vector<std::size_t> counts() const;
  std::size_t complete_generations() const;
};

struct TreeOptions {
  bool check_root = false;
};

/// T(K, G*, h) to `depth` generations below the root.
WhitneyTree build_tree(const WhitneyDecomposition& W, const TileAddress& root, int h, int depth,
                       const TreeOptions& opts = {});

/// Deterministic D-ary tree with the given stride (synthetic input for the
/// estimators and percolation).
WhitneyTree regular_tree(int D, int depth, int h);

struct GrowthEstimate {
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::vector<double> branching;  // |T_{k+1}| / |T_k|
};

/// log(geometric-mean branching) / (h log|lambda|) with a jackknife 95% interval.
/// InsufficientDepthError with fewer than 3 generations or an extinct tree.
GrowthEstimate growth_dimension(const std::vector<std::size_t>& counts, int h);
GrowthEstimate growth_dimension(const WhitneyTree& T);

}  // namespace flab
