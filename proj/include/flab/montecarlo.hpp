#pragma once

// Monte-Carlo estimates of the surround-or-miss event for killed Brownian
// paths, and the lattice-walk outer-boundary experiment.

#include <cstdint>
#include <vector>

#include "flab/exec.hpp"
#include "flab/fit.hpp"
#include "flab/gosper.hpp"
#include "flab/raster.hpp"

namespace flab {

enum class StartRegime {
  core,    // path starts uniformly in core(G, eta), G centered at the origin
  origin,  // path starts at the origin, G centered uniformly in [-1, 1]^2
};

struct SurroundOptions {
  StartRegime regime = StartRegime::core;
  double cells_per_eta = 8.0;     // eps = eta * diam / cells_per_eta
  std::size_t max_steps = 20'000'000;
  Exec exec = Exec::parallel;
};

struct ProbEstimate {
  double estimate = 0.0;
  Interval ci;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t surrounded = 0;  // successes through the surround branch
  std::size_t missed = 0;      // successes through the miss branch
  std::uint64_t seed = 0;
};

/// The event {K eta-surrounds G} or {K misses core(G, eta)} for a raster K.
struct SurroundVerdict {
  bool surrounds = false;
  bool hits = false;
  bool event() const { return surrounds || !hits; }
};
SurroundVerdict surround_event(const RasterSet& K, const TileFrame& G, double eta);

/// Tile of diameter r used by trial `k`, and the path start.
struct TrialSetup {
  TileFrame tile;
  Point start;
};
TrialSetup surround_setup(double eta, double r, std::uint64_t trial_seed, StartRegime regime);

/// Fraction of killed-Brownian trials for which the event holds, with a 95%
/// Wilson interval. Time step dt = eps^2 so the step size matches the cell.
/// `per_trial`, when given, receives each trial's verdict.
ProbEstimate surround_prob_mc(double eta, double r, std::size_t trials, std::uint64_t seed,
                              const SurroundOptions& opts = {}, std::vector<SurroundVerdict>* per_trial = nullptr);

struct OuterBoundaryPoint {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;
  std::size_t walks = 0;
};

/// Mean outer-boundary size of simple random walks of each length.
std::vector<OuterBoundaryPoint> srw_outer_boundary(const std::vector<std::size_t>& lengths, std::size_t walks,
                                                   std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace flab
