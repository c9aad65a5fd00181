#include "flab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "flab/error.hpp"
#include "flab/paths.hpp"
#include "flab/rng.hpp"
#include "flab/tst.hpp"

namespace flab {

namespace {

// Pulls typed values out of key=value overrides; leftovers are an error.
class Overrides {
 public:
  explicit Overrides(const KeyValues& kv) : kv_(kv) {}

  template <typename T>
  void get(const std::string& key, T& value) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    used_.push_back(key);
    const std::string& s = it->second;
    if constexpr (std::is_same_v<T, std::string>) {
      value = s;
    } else if constexpr (std::is_same_v<T, double>) {
      try {
        std::size_t pos = 0;
        value = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw InvalidArgument("config " + key + ": not a number: " + s);
      }
    } else {
      T v{};
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) throw InvalidArgument("config " + key + ": not an integer: " + s);
      value = v;
    }
  }

  void finish() const {
    for (const auto& [k, v] : kv_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) throw InvalidArgument("unknown config key: " + k);
    }
  }

 private:
  const KeyValues& kv_;
  std::vector<std::string> used_;
};

std::vector<Point> circle_points(double radius, std::size_t n) {
  std::vector<Point> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    pts[k] = {radius * std::cos(a), radius * std::sin(a)};
  }
  return pts;
}

}  // namespace

FrontierDimReport frontier_dim_experiment(const FrontierDimConfig& cfg, std::uint64_t seed) {
  if (cfg.seeds < 2) throw InvalidArgument("frontier-dim needs at least 2 seeds");
  FrontierDimReport rep;
  rep.config = cfg;
  const auto scales = dyadic_scales(cfg.eps0, cfg.scales);
  std::vector<double> dims;
  rep.min_r2 = 1.0;
  for (std::size_t k = 0; k < cfg.seeds; ++k) {
    FrontierDimRun run;
    run.seed = derive_seed(seed, k);
    const PathSample path = sample_bm(cfg.steps, cfg.dt, run.seed);
    run.estimate = frontier_dimension(path, scales);
    const FrontierResult f = frontier(rasterize_path(path, cfg.eps0));
    run.hole_count = f.hole_count;
    run.frontier_cells = f.frontier_cells.count();
    run.boundary_cells = f.boundary_cell_count;
    dims.push_back(run.estimate.slope);
    rep.min_r2 = std::min(rep.min_r2, run.estimate.r2);
    rep.runs.push_back(std::move(run));
  }
  rep.dimension = mean_stats(dims);
  return rep;
}

SrwExponentReport srw_exponent_experiment(const SrwExponentConfig& cfg, std::uint64_t seed) {
  if (cfg.log2_min < 1 || cfg.log2_max > 30 || cfg.log2_max <= cfg.log2_min) {
    throw InvalidArgument("srw-exponent needs 1 <= log2_min < log2_max <= 30");
  }
  SrwExponentReport rep;
  rep.config = cfg;
  std::vector<std::size_t> lengths;
  for (int k = cfg.log2_min; k <= cfg.log2_max; ++k) lengths.push_back(std::size_t{1} << k);
  rep.points = srw_outer_boundary(lengths, cfg.walks, seed);
  std::vector<std::pair<double, double>> pairs;
  for (const auto& p : rep.points) pairs.emplace_back(static_cast<double>(p.n), p.mean);
  rep.fit = exponent_fit(pairs);
  return rep;
}

SurroundC0Report surround_c0_experiment(const SurroundC0Config& cfg, std::uint64_t seed) {
  SurroundC0Report rep;
  rep.config = cfg;
  SurroundOptions o;
  o.cells_per_eta = cfg.cells_per_eta;
  o.regime = StartRegime::core;
  rep.core = surround_prob_mc(cfg.eta, cfg.r, cfg.trials, derive_seed(seed, 0), o);
  o.regime = StartRegime::origin;
  rep.origin = surround_prob_mc(cfg.eta, cfg.r, cfg.trials, derive_seed(seed, 1), o);
  return rep;
}

TestSet test_set_from_string(const std::string& s) {
  if (s == "bm") return TestSet::bm;
  if (s == "circle") return TestSet::circle;
  if (s == "segment") return TestSet::segment;
  throw InvalidArgument("unknown test set '" + s + "' (bm, circle, segment)");
}

std::string to_string(TestSet s) {
  switch (s) {
    case TestSet::bm: return "bm";
    case TestSet::circle: return "circle";
    case TestSet::segment: return "segment";
  }
  return "?";
}

std::vector<Point> test_set_points(const WhitneyGrowthConfig& cfg, std::uint64_t seed) {
  switch (cfg.set) {
    case TestSet::bm: return sample_bm(cfg.steps, cfg.dt, seed).points;
    case TestSet::circle: return circle_points(0.5, 4096);
    case TestSet::segment: return {{-0.5, 0.0}, {0.5, 0.0}};
  }
  return {};
}

WhitneyGrowthReport whitney_growth_experiment(const WhitneyGrowthConfig& cfg, std::uint64_t seed, const CellList* input,
                                              std::vector<TileAddress>* tiles_out) {
  if (cfg.root_level + cfg.h * cfg.depth > cfg.n_max) {
    throw InvalidArgument("root_level + h * depth exceeds n_max");
  }
  WhitneyGrowthReport rep;
  rep.config = cfg;
  CellList cells;
  Point ref;
  if (input) {
    if (input->cells.empty()) throw InvalidArgument("whitney-growth: empty input raster");
    cells = *input;
    cells.normalize();
    rep.config.eps = cells.grid.eps;
    ref = cells.grid.cell_center(cells.cells[cells.cells.size() / 2]);
  } else {
    const std::vector<Point> pts = test_set_points(cfg, seed);
    cells = rasterize_cells(pts, Grid{cfg.eps, {0.0, 0.0}}, cfg.set == TestSet::circle);
    cells.normalize();
    // Root near a reference point of K: the path midpoint, or a point on the curve.
    ref = cfg.set == TestSet::bm ? pts[pts.size() / 2] : (cfg.set == TestSet::circle ? Point{0.5, 0.0} : Point{0.0, 0.0});
  }
  rep.cells = cells.cells.size();
  auto K = std::make_shared<const CellIndex>(cells, true);

  const double root_diam = std::pow(gosper::kAbsLambda, -cfg.root_level);
  WhitneyOptions wo;
  wo.roi = Disk{ref, 0.5 * blowup_factor(5) * root_diam + 2.0 * root_diam};
  const WhitneyDecomposition W = whitney_tiles(K, 0, cfg.n_max, wo);
  rep.tiles = W.tiles.size();
  if (tiles_out) *tiles_out = W.tiles;
  rep.gaps = level_gaps(W);

  auto roots = W.at_level(cfg.root_level);
  std::sort(roots.begin(), roots.end(), [&](const TileAddress& a, const TileAddress& b) {
    const double da = distance(center(a), ref), db = distance(center(b), ref);
    return da != db ? da < db : a < b;
  });
  bool built = false;
  std::string why = "no Whitney tile at the root level near the reference point";
  for (std::size_t k = 0; k < std::min<std::size_t>(roots.size(), 8) && !built; ++k) {
    try {
      rep.tree = build_tree(W, roots[k], cfg.h, cfg.depth);
      built = true;
    } catch (const InvalidArgument& e) {
      why = e.what();
    }
  }
  if (!built) throw InvalidArgument("whitney-growth: " + why);

  const double bound = std::pow(gosper::kAbsLambda, 14);
  for (std::size_t g = 0; g + 1 < rep.tree.generations.size(); ++g) {
    const auto& gen = rep.tree.generations[g];
    const auto& next = rep.tree.generations[g + 1];
    for (std::size_t i = 0; i < gen.size(); ++i) {
      const TreeNode& n = gen[i];
      if (n.candidates > 0) {
        rep.max_prune_ratio = std::max(rep.max_prune_ratio, n.children ? static_cast<double>(n.candidates) / static_cast<double>(n.children)
                                                                     : std::numeric_limits<double>::infinity());
      }
      if (static_cast<double>(n.candidates) > bound * static_cast<double>(n.children)) ++rep.prune_violations;
      std::vector<Region> kids;
      for (const TreeNode& c : next)
        if (c.parent == static_cast<int>(i)) kids.push_back(lambda_blow_up(c.tile, 6, 6));
      for (std::size_t a = 0; a < kids.size(); ++a)
        for (std::size_t b = a + 1; b < kids.size(); ++b) {
          ++rep.sibling_pairs;
          if (!regions_disjoint(kids[a], kids[b], 6)) ++rep.sibling_overlaps;
        }
    }
  }
  try {
    rep.growth = growth_dimension(rep.tree);
  } catch (const InsufficientDepthError& e) {
    rep.growth_error = e.what();
  }
  return rep;
}

TstCircleReport tst_circle_experiment(const TstCircleConfig& cfg) {
  if (cfg.j_min < 0 || cfg.j_max < cfg.j_min) throw InvalidArgument("tst-circle needs 0 <= j_min <= j_max");
  TstCircleReport rep;
  rep.config = cfg;
  const auto pts = circle_points(cfg.radius, cfg.points);
  const double length = 2.0 * std::numbers::pi * cfg.radius;
  for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
    const BetaAtlas a = tst_sum(pts, j);
    rep.rows.push_back({j, a.sum, a.sum / length, a.entries.size()});
  }
  std::vector<Point> seg(cfg.points);
  for (std::size_t k = 0; k < cfg.points; ++k) {
    seg[k] = {-cfg.radius + 2.0 * cfg.radius * static_cast<double>(k) / static_cast<double>(cfg.points - 1), 0.0};
  }
  const BetaAtlas s = tst_sum(seg, cfg.j_max);
  rep.segment_sum = s.sum;
  rep.segment_diam = s.diam_E;
  return rep;
}

Json to_json(const FrontierDimReport& r) {
  Json runs = Json::array();
  for (const auto& x : r.runs) {
    runs.push_back({{"seed", x.seed},
                    {"dimension", x.estimate.slope},
                    {"r2", x.estimate.r2},
                    {"hole_count", x.hole_count},
                    {"frontier_cells", x.frontier_cells},
                    {"boundary_cells", x.boundary_cells}});
  }
  return {{"experiment", "frontier-dim"},
          {"config",
           {{"seeds", r.config.seeds}, {"steps", r.config.steps}, {"dt", r.config.dt}, {"eps0", r.config.eps0}, {"scales", r.config.scales}}},
          {"mean_dimension", r.dimension.mean},
          {"se", r.dimension.se},
          {"sd", r.dimension.sd},
          {"min_r2", r.min_r2},
          {"runs", runs}};
}

Json to_json(const SrwExponentReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) pts.push_back({{"n", p.n}, {"mean", p.mean}, {"se", p.se}, {"walks", p.walks}});
  return {{"experiment", "srw-exponent"},
          {"config", {{"log2_min", r.config.log2_min}, {"log2_max", r.config.log2_max}, {"walks", r.config.walks}}},
          {"exponent", r.fit.slope},
          {"se", r.fit.slope_se},
          {"ci", {r.fit.ci_lo, r.fit.ci_hi}},
          {"r2", r.fit.r2},
          {"points", pts}};
}

namespace {

Json prob_json(const ProbEstimate& p) {
  return {{"estimate", p.estimate}, {"ci", to_json(p.ci)}, {"n_trials", p.trials},      {"successes", p.successes},
          {"surrounded", p.surrounded}, {"missed", p.missed}, {"seed", p.seed}};
}

}  // namespace

Json to_json(const SurroundC0Report& r) {
  return {{"experiment", "surround-c0"},
          {"config", {{"eta", r.config.eta}, {"r", r.config.r}, {"trials", r.config.trials}, {"cells_per_eta", r.config.cells_per_eta}}},
          {"core", prob_json(r.core)},
          {"origin", prob_json(r.origin)}};
}

Json to_json(const WhitneyGrowthReport& r) {
  Json j{{"experiment", "whitney-growth"},
         {"config",
          {{"set", to_string(r.config.set)}, {"steps", r.config.steps}, {"dt", r.config.dt}, {"eps", r.config.eps},
           {"n_max", r.config.n_max}, {"h", r.config.h}, {"depth", r.config.depth}, {"root_level", r.config.root_level}}},
         {"cells", r.cells},
         {"tiles", r.tiles},
         {"level_gaps", {{"pairs", r.gaps.pairs}, {"violations", r.gaps.violations}, {"max_gap", r.gaps.max_gap}}},
         {"tree", to_json(r.tree)},
         {"max_prune_ratio", r.max_prune_ratio},
         {"prune_violations", r.prune_violations},
         {"sibling_pairs", r.sibling_pairs},
         {"sibling_overlaps", r.sibling_overlaps}};
  if (r.growth) {
    j["growth_dimension"] = {{"estimate", r.growth->estimate}, {"ci", {r.growth->ci_lo, r.growth->ci_hi}}, {"branching", r.growth->branching}};
  } else {
    j["growth_dimension"] = {{"error", r.growth_error}};
  }
  return j;
}

Json to_json(const TstCircleReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows) rows.push_back({{"j_max", x.j_max}, {"sum", x.sum}, {"ratio", x.ratio}, {"squares", x.squares}});
  return {{"experiment", "tst-circle"},
          {"config", {{"radius", r.config.radius}, {"points", r.config.points}, {"j_min", r.config.j_min}, {"j_max", r.config.j_max}}},
          {"rows", rows},
          {"segment", {{"sum", r.segment_sum}, {"diam", r.segment_diam}}}};
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"frontier-dim", "srw-exponent", "surround-c0", "whitney-growth", "tst-circle"};
  return names;
}

ExperimentOutput run_experiment(const std::string& name, const KeyValues& overrides, std::uint64_t seed) {
  Overrides o(overrides);
  ExperimentOutput out;
  if (name == "frontier-dim") {
    FrontierDimConfig c;
    o.get("seeds", c.seeds);
    o.get("steps", c.steps);
    o.get("dt", c.dt);
    o.get("eps0", c.eps0);
    o.get("scales", c.scales);
    o.finish();
    const auto r = frontier_dim_experiment(c, seed);
    out.report = to_json(r);
    CsvWriter csv({"seed", "eps", "frontier_cells"});
    for (const auto& run : r.runs)
      for (std::size_t k = 0; k < run.estimate.scales.size(); ++k)
        csv.row({std::to_string(run.seed), CsvWriter::num(run.estimate.scales[k]), std::to_string(run.estimate.counts[k])});
    out.csv = csv.str();
  } else if (name == "srw-exponent") {
    SrwExponentConfig c;
    o.get("log2_min", c.log2_min);
    o.get("log2_max", c.log2_max);
    o.get("walks", c.walks);
    o.finish();
    const auto r = srw_exponent_experiment(c, seed);
    out.report = to_json(r);
    CsvWriter csv({"n", "mean", "se", "walks"});
    for (const auto& p : r.points)
      csv.row({std::to_string(p.n), CsvWriter::num(p.mean), CsvWriter::num(p.se), std::to_string(p.walks)});
    out.csv = csv.str();
  } else if (name == "surround-c0") {
    SurroundC0Config c;
    o.get("eta", c.eta);
    o.get("r", c.r);
    o.get("trials", c.trials);
    o.get("cells_per_eta", c.cells_per_eta);
    o.finish();
    const auto r = surround_c0_experiment(c, seed);
    out.report = to_json(r);
    CsvWriter csv({"regime", "estimate", "ci_lo", "ci_hi", "trials", "surrounded", "missed"});
    for (const auto& [reg, p] : {std::pair{"core", r.core}, std::pair{"origin", r.origin}})
      csv.row({reg, CsvWriter::num(p.estimate), CsvWriter::num(p.ci.lo), CsvWriter::num(p.ci.hi), std::to_string(p.trials),
               std::to_string(p.surrounded), std::to_string(p.missed)});
    out.csv = csv.str();
  } else if (name == "whitney-growth") {
    WhitneyGrowthConfig c;
    std::string set = to_string(c.set);
    o.get("set", set);
    o.get("steps", c.steps);
    o.get("dt", c.dt);
    o.get("eps", c.eps);
    o.get("n_max", c.n_max);
    o.get("h", c.h);
    o.get("depth", c.depth);
    o.get("root_level", c.root_level);
    o.finish();
    c.set = test_set_from_string(set);
    const auto r = whitney_growth_experiment(c, seed);
    out.report = to_json(r);
    CsvWriter csv({"generation", "level", "nodes", "candidates", "children"});
    for (std::size_t g = 0; g < r.tree.generations.size(); ++g) {
      std::size_t cand = 0, kids = 0;
      for (const auto& n : r.tree.generations[g]) {
        cand += n.candidates;
        kids += n.children;
      }
      csv.row({std::to_string(g), std::to_string(r.tree.root.level + static_cast<int>(g) * r.tree.h),
               std::to_string(r.tree.generations[g].size()), std::to_string(cand), std::to_string(kids)});
    }
    out.csv = csv.str();
  } else if (name == "tst-circle") {
    TstCircleConfig c;
    o.get("radius", c.radius);
    o.get("points", c.points);
    o.get("j_min", c.j_min);
    o.get("j_max", c.j_max);
    o.finish();
    const auto r = tst_circle_experiment(c);
    out.report = to_json(r);
    CsvWriter csv({"j_max", "sum", "ratio", "squares"});
    for (const auto& x : r.rows)
      csv.row({std::to_string(x.j_max), CsvWriter::num(x.sum), CsvWriter::num(x.ratio), std::to_string(x.squares)});
    out.csv = csv.str();
  } else {
    throw InvalidArgument("unknown experiment '" + name + "'");
  }
  return out;
}

}  // namespace flab
