#pragma once

// Named end-to-end experiments shared by `flab experiment` and the acceptance
// suite. Each takes a typed config (overridable from key=value pairs) and a
// master seed; trial k uses derive_seed(seed, k).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flab/box_dimension.hpp"
#include "flab/fit.hpp"
#include "flab/io.hpp"
#include "flab/montecarlo.hpp"
#include "flab/whitney.hpp"

namespace flab {

using KeyValues = std::map<std::string, std::string>;

struct FrontierDimConfig {
  std::size_t seeds = 20;
  std::size_t steps = 1'000'000;
  double dt = 1e-6;
  double eps0 = 1e-3;  // finest box
  int scales = 7;      // eps0 * 2^k, k < scales
};

struct FrontierDimRun {
  std::uint64_t seed = 0;
  DimEstimate estimate;
  int hole_count = 0;  // at eps0
  std::size_t frontier_cells = 0;
  std::size_t boundary_cells = 0;
};

struct FrontierDimReport {
  FrontierDimConfig config;
  std::vector<FrontierDimRun> runs;
  MeanStats dimension;
  double min_r2 = 0.0;
};

FrontierDimReport frontier_dim_experiment(const FrontierDimConfig& cfg, std::uint64_t seed);

struct SrwExponentConfig {
  int log2_min = 10;
  int log2_max = 16;
  std::size_t walks = 200;
};

struct SrwExponentReport {
  SrwExponentConfig config;
  std::vector<OuterBoundaryPoint> points;
  LineFit fit;
};

SrwExponentReport srw_exponent_experiment(const SrwExponentConfig& cfg, std::uint64_t seed);

struct SurroundC0Config {
  double eta = 0.05;
  double r = 0.25;
  std::size_t trials = 1000;
  double cells_per_eta = 8.0;
};

struct SurroundC0Report {
  SurroundC0Config config;
  ProbEstimate core;    // start uniform in core(G, eta)
  ProbEstimate origin;  // start at the origin, G at a random offset
};

SurroundC0Report surround_c0_experiment(const SurroundC0Config& cfg, std::uint64_t seed);

/// Test sets for the Whitney experiments.
enum class TestSet { bm, circle, segment };
TestSet test_set_from_string(const std::string& s);
std::string to_string(TestSet s);

struct WhitneyGrowthConfig {
  TestSet set = TestSet::bm;
  std::size_t steps = 10'000;  // bm only
  double dt = 1e-4;            // bm only
  double eps = 3.5e-5;
  int n_max = 9;
  int h = 2;
  int depth = 2;
  int root_level = 5;
};

struct WhitneyGrowthReport {
  WhitneyGrowthConfig config;
  std::size_t cells = 0;
  std::size_t tiles = 0;
  LevelGapReport gaps;
  WhitneyTree tree;
  std::optional<GrowthEstimate> growth;
  std::string growth_error;
  double max_prune_ratio = 0.0;     // max |T~| / |T| over nodes with candidates
  std::size_t prune_violations = 0; // nodes with |T~| > |lambda|^14 |T|
  std::size_t sibling_pairs = 0;
  std::size_t sibling_overlaps = 0; // sibling lambda^6 blow-ups found to meet
};

/// Polyline of the chosen test set (bm uses `seed`).
std::vector<Point> test_set_points(const WhitneyGrowthConfig& cfg, std::uint64_t seed);

/// With `input` the raster replaces the test set (its eps overrides cfg.eps).
/// `tiles_out` receives the Whitney tiles of the region of interest.
WhitneyGrowthReport whitney_growth_experiment(const WhitneyGrowthConfig& cfg, std::uint64_t seed,
                                              const CellList* input = nullptr,
                                              std::vector<TileAddress>* tiles_out = nullptr);

struct TstCircleConfig {
  double radius = 0.5;
  std::size_t points = 20'000;
  int j_min = 2;
  int j_max = 8;
};

struct TstCircleRow {
  int j_max = 0;
  double sum = 0.0;
  double ratio = 0.0;  // sum / circumference
  std::size_t squares = 0;
};

struct TstCircleReport {
  TstCircleConfig config;
  std::vector<TstCircleRow> rows;
  double segment_sum = 0.0;   // tst_sum of a segment of the same diameter
  double segment_diam = 0.0;
};

TstCircleReport tst_circle_experiment(const TstCircleConfig& cfg);

Json to_json(const FrontierDimReport& r);
Json to_json(const SrwExponentReport& r);
Json to_json(const SurroundC0Report& r);
Json to_json(const WhitneyGrowthReport& r);
Json to_json(const TstCircleReport& r);

struct ExperimentOutput {
  Json report;
  std::string csv;  // raw per-trial or per-scale rows
};

const std::vector<std::string>& experiment_names();

/// Runs a named experiment with config overrides. InvalidArgument for an
/// unknown name or key.
ExperimentOutput run_experiment(const std::string& name, const KeyValues& overrides, std::uint64_t seed);

}  // namespace flab
