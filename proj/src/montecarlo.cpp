#include "flab/montecarlo.hpp"

#include <cmath>

#include "flab/error.hpp"
#include "flab/paths.hpp"
#include "flab/rng.hpp"

namespace flab {

SurroundVerdict surround_event(const RasterSet& K, const TileFrame& G, double eta) {
  SurroundVerdict v;
  if (K.empty()) return v;
  v.hits = hits_core(K, G, eta);
  if (v.hits) v.surrounds = eta_surrounds(K, G, eta);
  return v;
}

TrialSetup surround_setup(double eta, double r, std::uint64_t trial_seed, StartRegime regime) {
  PhiloxStream rng(derive_seed(trial_seed, stream::placement));
  if (regime == StartRegime::origin) {
    const double cx = 2.0 * rng.uniform() - 1.0;
    const double cy = 2.0 * rng.uniform() - 1.0;
    return {TileFrame::with_diameter({cx, cy}, r), {0.0, 0.0}};
  }
  const TileFrame tile = TileFrame::with_diameter({0.0, 0.0}, r);
  const double need = eta * r;
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const Point p{(rng.uniform() - 0.5) * r, (rng.uniform() - 0.5) * r};
    if (depth(tile, p, 7) > need) return {tile, p};
  }
  throw Error("could not sample a start point in the core");
}

ProbEstimate surround_prob_mc(double eta, double r, std::size_t trials, std::uint64_t seed,
                              const SurroundOptions& opts, std::vector<SurroundVerdict>* per_trial) {
  if (!(eta > 0.0 && eta < 0.1)) throw InvalidArgument("surround_prob_mc needs 0 < eta < 1/10");
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("surround_prob_mc needs 0 < r < 1");
  const double eps = eta * r / opts.cells_per_eta;
  check_surround_resolution(eps, eta, r);
  const double dt = eps * eps;

  if (per_trial) per_trial->assign(trials, SurroundVerdict{});
  std::size_t ok = 0, surrounded = 0, missed = 0;
  const auto n = static_cast<std::int64_t>(trials);
  auto trial = [&](std::int64_t k, std::size_t& o, std::size_t& s, std::size_t& m) {
    const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(k));
    const TrialSetup setup = surround_setup(eta, r, ts, opts.regime);
    PathSample path = sample_killed(opts.max_steps, dt, ts, Exec::serial);
    for (Point& p : path.points) p = p + setup.start;
    const Grid grid{eps, {0.0, 0.0}};
    const double R = setup.tile.circumradius() + 3.0 * eps;
    const Point c = setup.tile.center_point();
    const Cell lo = grid.cell_of({c.x - R, c.y - R}), hi = grid.cell_of({c.x + R, c.y + R});
    const CellList cells = rasterize_cells(path.points, grid, CellBox{lo.i, lo.j, hi.i, hi.j});
    SurroundVerdict v;
    if (!cells.cells.empty()) v = surround_event(RasterSet::from_list(cells), setup.tile, eta);
    if (per_trial) (*per_trial)[static_cast<std::size_t>(k)] = v;
    if (v.event()) {
      ++o;
      if (v.hits) ++s; else ++m;
    }
  };
  if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : ok, surrounded, missed)
    for (std::int64_t k = 0; k < n; ++k) trial(k, ok, surrounded, missed);
  } else {
    for (std::int64_t k = 0; k < n; ++k) trial(k, ok, surrounded, missed);
  }
  ProbEstimate est;
  est.trials = trials;
  est.successes = ok;
  est.surrounded = surrounded;
  est.missed = missed;
  est.seed = seed;
  est.estimate = trials ? static_cast<double>(ok) / static_cast<double>(trials) : 0.0;
  est.ci = wilson_interval(ok, trials);
  return est;
}

std::vector<OuterBoundaryPoint> srw_outer_boundary(const std::vector<std::size_t>& lengths, std::size_t walks,
                                                   std::uint64_t seed, Exec exec) {
  std::vector<OuterBoundaryPoint> out;
  for (std::size_t len : lengths) {
    std::vector<double> counts(walks);
    const auto nw = static_cast<std::int64_t>(walks);
    const std::uint64_t base = derive_seed(seed, len);
    auto one = [&](std::int64_t w) {
      const auto pts = srw_lattice_points(len, derive_seed(base, static_cast<std::uint64_t>(w)));
      counts[static_cast<std::size_t>(w)] = static_cast<double>(outer_boundary_lattice(pts));
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (std::int64_t w = 0; w < nw; ++w) one(w);
    } else {
      for (std::int64_t w = 0; w < nw; ++w) one(w);
    }
    const MeanStats s = mean_stats(counts);
    out.push_back({len, s.mean, s.se, walks});
  }
  return out;
}

}  // namespace flab
