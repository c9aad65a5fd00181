// Acceptance checks A1..A10. `flab_acceptance [A3 A7 ...]` runs the named
// criteria (all by default) and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "flab/box_dimension.hpp"
#include "flab/branching.hpp"
#include "flab/experiments.hpp"
#include "flab/gosper.hpp"
#include "flab/paths.hpp"
#include "flab/raster.hpp"
#include "flab/rng.hpp"
#include "flab/tst.hpp"
#include "test_util.hpp"

using namespace flab;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict a1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool counts = true, ok = true;
  std::string detail = "ratios";
  std::vector<std::vector<Point>> poly;
  for (int g = 0; g <= 6; ++g) {
    poly.push_back(boundary_polygon(g).vertices);
    counts = counts && poly.back().size() == 6 * static_cast<std::size_t>(std::pow(3, g));
  }
  std::vector<double> d;
  for (int g = 1; g <= 6; ++g) d.push_back(hausdorff_distance(poly[g - 1], poly[g]));
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    const double r = d[k + 1] / d[k];
    ok = ok && r >= 0.368 && r <= 0.388;
    detail += fmt(" %.5f", r);
  }
  const double t = seconds_since(t0);
  ok = ok && counts && t < 10.0;
  return {ok, detail + fmt("; vertex counts 6*3^g %s; %.2fs", counts ? "exact" : "wrong", t)};
}

Verdict a2() {
  const double target = std::sqrt(3.0) / 14.0;
  double step = 0;
  for (int g = 0; g <= 6; ++g) step = std::max(step, max_step_deviation(g));
  double cum = 0;
  for (int g = 1; g <= 8; ++g) cum = std::max(cum, max_cumulative_deviation(g));
  const bool ok = std::abs(step - target) <= 1e-6 && cum <= 0.198893;
  return {ok, fmt("step deviation %.9f (target %.9f), cumulative %.6f (bound 0.198893)", step, target, cum)};
}

Verdict a3() {
  const auto t0 = std::chrono::steady_clock::now();
  const FrontierDimReport r = frontier_dim_experiment({}, kSeed);
  const double t = seconds_since(t0);
  const double z = (r.dimension.mean - 1.0) / r.dimension.se;
  const double decades = std::log10(r.config.eps0 * std::ldexp(1.0, r.config.scales - 1) / r.config.eps0);
  const bool ok = r.runs.size() >= 20 && r.config.steps >= 1'000'000 && decades >= 1.5 && r.dimension.mean >= 1.20 &&
                  r.dimension.mean <= 1.45 && r.min_r2 >= 0.99 && z > 3.0 && t < 1800.0;
  return {ok, fmt("%zu runs, mean %.4f se %.4f ((mean-1)/se %.1f), min r2 %.5f, %.2f decades, %.0fs", r.runs.size(),
                  r.dimension.mean, r.dimension.se, z, r.min_r2, decades, t)};
}

Verdict a4() {
  std::vector<std::pair<std::string, WhitneyGrowthConfig>> sets;
  for (int s = 1; s <= 5; ++s) sets.push_back({"bm" + std::to_string(s), WhitneyGrowthConfig{}});
  WhitneyGrowthConfig circle;
  circle.set = TestSet::circle;
  WhitneyGrowthConfig segment;
  segment.set = TestSet::segment;
  sets.push_back({"circle", circle});
  sets.push_back({"segment", segment});
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const std::uint64_t seed = k < 5 ? k + 1 : kSeed;
    const WhitneyGrowthReport r = whitney_growth_experiment(sets[k].second, seed);
    ok = ok && r.gaps.pairs > 0 && r.gaps.violations == 0 && r.sibling_overlaps == 0 && r.prune_violations == 0;
    detail += fmt("%s%s: gaps %zu/%zu siblings %zu/%zu prune %zu (max %.1f)", k ? "; " : "", sets[k].first.c_str(),
                  r.gaps.violations, r.gaps.pairs, r.sibling_overlaps, r.sibling_pairs, r.prune_violations,
                  r.max_prune_ratio);
  }
  return {ok, detail};
}

Verdict a5() {
  const auto t0 = std::chrono::steady_clock::now();
  const SrwExponentReport r = srw_exponent_experiment({}, kSeed);
  const double t = seconds_since(t0);
  const double z = (r.fit.slope - 0.5) / r.fit.slope_se;
  const bool ok = r.config.walks >= 200 && r.config.log2_min <= 10 && r.config.log2_max >= 16 && r.fit.slope >= 0.55 &&
                  r.fit.slope <= 0.75 && z > 3.0 && t < 1200.0;
  return {ok, fmt("slope %.4f se %.4f ((slope-0.5)/se %.1f), %.0fs", r.fit.slope, r.fit.slope_se, z, t)};
}

Verdict a6() {
  const BranchingSpec s{0, 2, 1.5};
  const double q = extinction_prob(s);
  const BranchingSim sim = simulate_branching(s, 100000, kSeed);
  bool ok = std::abs(q - 1.0 / 3.0) <= 1e-10 && std::abs(sim.q_hat() - q) <= 0.01;
  std::string detail = fmt("q %.12f, simulated %.4f; percolation depth 20:", q, sim.q_hat());
  for (double p : {0.4, 0.5, 0.6}) {
    const std::size_t n = 10000;
    const SurvivalEstimate e = percolation_survival(2, 20, p, n, derive_seed(kSeed, static_cast<std::uint64_t>(p * 10)));
    const double f = e.frequency();
    const double oracle = 1.0 - extinction_prob({0, 2, 2 * p});
    const double sigma = std::sqrt(std::max(f * (1 - f), oracle * (1 - oracle)) / static_cast<double>(n));
    const bool hit = std::abs(f - oracle) <= 3 * sigma;
    ok = ok && hit;
    detail += fmt(" p=%.1f freq %.4f psi-oracle %.4f (3sigma %.4f) %s [binomial %.4f]", p, f, oracle, 3 * sigma,
                  hit ? "ok" : "off", 1.0 - binomial_extinction_by(2, p, 20));
  }
  return {ok, detail};
}

Verdict a7() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(3, 50);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<Point> pts(size(rng));
    for (Point& p : pts) p = {u(rng), u(rng)};
    worst = std::max(worst, std::abs(beta(pts, 1.0) - test::brute_half_width(pts)));
  }
  std::size_t nonzero = 0;
  for (int k = 0; k < 1000; ++k) {
    const Point a{u(rng), u(rng)}, d{u(rng), u(rng)};
    std::vector<Point> pts(size(rng));
    for (Point& p : pts) p = a + d * u(rng);
    nonzero += beta(pts, 1.0) != 0.0;
  }
  std::vector<Point> seg;
  for (int k = 0; k <= 1000; ++k) seg.push_back({0.2 + 0.6 * k / 1000.0, 0.3 + 0.8 * k / 1000.0});
  const BetaAtlas atlas = tst_sum(seg, 8);
  const bool ok = worst <= 1e-6 && nonzero == 0 && atlas.sum == atlas.diam_E;
  return {ok, fmt("max |beta - brute| %.2e over 1000 sets, collinear nonzero %zu/1000, segment sum - diam %.3e", worst,
                  nonzero, atlas.sum - atlas.diam_E)};
}

Verdict a8() {
  const SurroundC0Report r = surround_c0_experiment({}, kSeed);
  const bool ok = r.core.ci.lo > 0.0 && r.origin.ci.lo > 0.0;
  return {ok, fmt("core %zu/%zu ci [%.4f, %.4f] (surround %zu, miss %zu); origin %zu/%zu ci [%.4f, %.4f] (surround %zu, miss %zu)",
                  r.core.successes, r.core.trials, r.core.ci.lo, r.core.ci.hi, r.core.surrounded, r.core.missed,
                  r.origin.successes, r.origin.trials, r.origin.ci.lo, r.origin.ci.hi, r.origin.surrounded,
                  r.origin.missed)};
}

Verdict a9() {
  const CellList K = rasterize_cells(boundary_polygon(8).vertices, Grid{1e-4, {0, 0}}, true);
  const DimEstimate d = box_dimension(K, dyadic_scales(1e-3, 6));
  const bool ok = d.slope >= 1.10 && d.slope <= 1.16;
  return {ok, fmt("slope %.4f r2 %.5f (log3/log sqrt7 = %.4f)", d.slope, d.r2, std::log(3.0) / std::log(std::sqrt(7.0)))};
}

Verdict a10() {
  std::mt19937_64 rng(kSeed);
  const double eps = 2e-3;
  const Grid grid{eps, {0, 0}};
  std::size_t violations = 0, pairs = 0, cells = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const PathSample p = sample_bm(100000, 1e-5, derive_seed(kSeed, s));
    std::uniform_int_distribution<std::size_t> u(1, p.steps());
    for (int k = 0; k < 100; ++k, ++pairs) {
      std::size_t t = u(rng), r = u(rng);
      if (t > r) std::swap(t, r);
      const FrontierResult fs = frontier(rasterize_path(prefix(p, r), eps));
      const FrontierResult ft = frontier(rasterize_path(prefix(p, t), eps));
      const std::vector<Point> tail(p.points.begin() + static_cast<std::ptrdiff_t>(t),
                                    p.points.begin() + static_cast<std::ptrdiff_t>(r) + 1);
      const RasterSet mid = RasterSet::from_list(rasterize_cells(tail, grid));
      for (const Cell& c : fs.frontier_cells.cells()) {
        ++cells;
        if (!ft.frontier_cells.test(c) && !mid.test(c)) ++violations;
      }
    }
  }
  return {violations == 0, fmt("%zu violations over %zu pairs (%zu frontier cells checked)", violations, pairs, cells)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
  std::vector<std::string> want(argv + 1, argv + argc);
  int failed = 0, ran = 0;
  for (const auto& [id, run] : all) {
    if (!want.empty() && std::find(want.begin(), want.end(), id) == want.end()) continue;
    ++ran;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %s %s\n", id.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion\n");
    return 2;
  }
  return failed ? 1 : 0;
}
