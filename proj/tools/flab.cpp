// flab: command-line front end. Every command writes <out>.manifest.json;
// `flab --replay <manifest>` re-runs it with the recorded parameters.
//
// Exit codes: 0 success, 1 numeric or resolution failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "flab/box_dimension.hpp"
#include "flab/branching.hpp"
#include "flab/error.hpp"
#include "flab/experiments.hpp"
#include "flab/golden.hpp"
#include "flab/gosper.hpp"
#include "flab/io.hpp"
#include "flab/montecarlo.hpp"
#include "flab/paths.hpp"
#include "flab/raster.hpp"
#include "flab/rng.hpp"
#include "flab/svg.hpp"
#include "flab/tst.hpp"
#include "flab/whitney.hpp"

namespace {

using namespace flab;

std::string fmt_double(double v) { return CsvWriter::num(v); }

// Options of one (sub)command, recorded for the manifest.
struct Param {
  std::string name;  // without dashes
  std::function<std::string()> value;
  bool flag = false;
  bool multi = false;  // repeated option, values joined by ';'
};

class Command {
 public:
  Command(CLI::App* app, std::string path) : app_(app), path_(std::move(path)) {}

  CLI::App* app() const { return app_; }
  const std::string& path() const { return path_; }

  template <typename T>
  CLI::Option* opt(const std::string& name, T& var, const std::string& desc) {
    CLI::Option* o = app_->add_option("--" + name, var, desc)->capture_default_str();
    params_.push_back({name, [&var] { return show(var); }});
    return o;
  }
  CLI::Option* flag(const std::string& name, bool& var, const std::string& desc) {
    CLI::Option* o = app_->add_flag("--" + name, var, desc);
    params_.push_back({name, [&var] { return std::string(var ? "true" : "false"); }, true});
    return o;
  }
  CLI::Option* multi(const std::string& name, std::vector<std::string>& var, const std::string& desc) {
    CLI::Option* o = app_->add_option("--" + name, var, desc);
    params_.push_back({name, [&var] {
                         std::string s;
                         for (std::size_t k = 0; k < var.size(); ++k) s += (k ? ";" : "") + var[k];
                         return s;
                       },
                       false, true});
    return o;
  }

  std::map<std::string, std::string> snapshot() const {
    std::map<std::string, std::string> out;
    for (const Param& p : params_) out[p.name] = p.value();
    return out;
  }
  const std::vector<Param>& params() const { return params_; }

  std::function<void()> run;

 private:
  template <typename T>
  static std::string show(const T& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_floating_point_v<T>) {
      return fmt_double(v);
    } else {
      return std::to_string(v);
    }
  }

  CLI::App* app_;
  std::string path_;
  std::vector<Param> params_;
};

struct Context {
  std::uint64_t seed = 1;
  std::vector<std::string> outputs;
  const Command* active = nullptr;

  void write(const std::string& path, const std::string& content) {
    write_text(path, content);
    outputs.push_back(path);
  }
  void write(const std::string& path, const Json& j) { write(path, j.dump(2) + "\n"); }
  void write_pbm(const RasterSet& K, const std::string& path) {
    flab::write_pbm(K, path);
    outputs.push_back(path);
    outputs.push_back(path + ".json");
  }
};

Json params_json(const Command& c) {
  Json p = Json::object();
  for (const auto& [k, v] : c.snapshot()) p[k] = v;
  return p;
}

PathSample make_path(const std::string& kind, std::size_t steps, double dt, std::uint64_t seed) {
  if (kind == "bm") return sample_bm(steps, dt, seed);
  if (kind == "killed") return sample_killed(steps, dt, seed);
  if (kind == "bridge") return sample_bridge(steps, seed);
  if (kind == "bridge-reversed") return sample_bridge_reversed(steps, seed);
  if (kind == "srw") return sample_srw(steps, seed);
  throw InvalidArgument("unknown path kind '" + kind + "' (bm, killed, bridge, bridge-reversed, srw)");
}

std::vector<Point> beta_input(const std::string& set, std::size_t points, std::size_t steps, double dt, int generation,
                              std::uint64_t seed) {
  if ((set == "segment" || set == "circle") && points < 3) throw InvalidArgument("--points must be >= 3");
  if (set == "segment") {
    std::vector<Point> seg(points);
    for (std::size_t k = 0; k < points; ++k)
      seg[k] = {-0.5 + static_cast<double>(k) / static_cast<double>(points - 1), 0.0};
    return seg;
  }
  if (set == "circle") {
    std::vector<Point> circ(points);
    for (std::size_t k = 0; k < points; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
      circ[k] = {0.5 * std::cos(a), 0.5 * std::sin(a)};
    }
    return circ;
  }
  if (set == "bm") return sample_bm(steps, dt, seed).points;
  if (set == "gosper") return boundary_polygon(generation).vertices;
  throw InvalidArgument("unknown set '" + set + "' (circle, segment, bm, gosper)");
}

KeyValues parse_kv(const std::vector<std::string>& items) {
  KeyValues kv;
  for (const std::string& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("expected key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return kv;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------- commands

struct TilingArgs {
  int level = 0, levels = 1, generation = 4;
  double window = 1.0;
  bool compute = false;
  std::string out = "tiling";
};

struct PathArgs {
  std::string kind = "bm", format = "csv", out = "path";
  std::size_t steps = 100'000;
  double dt = 1e-5;
};

struct FrontierArgs {
  std::string kind = "bm", out = "frontier";
  std::size_t steps = 1'000'000;
  double dt = 1e-6, eps = 1e-3;
  int scales = 0;
  bool svg = false;
};

struct WhitneyArgs {
  std::string set = "bm", input, out = "whitney";
  WhitneyGrowthConfig cfg;
};

struct BetaArgs {
  std::string set = "circle", out = "beta";
  std::size_t points = 4096, steps = 10'000;
  double dt = 1e-4, r = 0.0;
  int jmax = 6, generation = 5;
  bool tiles = false;
};

struct StatsArgs {
  // box
  std::string input;
  double eps0 = 0.0;
  int scales = 7;
  // extinction
  int m = 0, M = 2, generations = 200;
  double b = 1.5;
  std::size_t runs = 100'000;
  // percolate
  int D = 2, depth = 20;
  double p = 0.5;
  std::size_t trials = 10'000;
  // surround
  double eta = 0.05, r = 0.25;
  std::string regime = "core";
  // fit
  bool loglog = false;
  std::string out = "stats";
};

struct ExperimentArgs {
  std::string name, out = "experiment";
  std::vector<std::string> params;
};

void cmd_tiling(Context& ctx, const TilingArgs& a) {
  if (a.levels < 1) throw InvalidArgument("--levels must be >= 1");
  if (!(a.window > 0.0)) throw InvalidArgument("--window must be positive");
  const ViewBox view{-a.window, -a.window, a.window, a.window};
  std::vector<TileAddress> tiles;
  for (int n = a.level; n < a.level + a.levels; ++n) {
    auto t = tiles_in_view(n, view);
    tiles.insert(tiles.end(), t.begin(), t.end());
  }
  ctx.write(a.out + ".svg", tiling_svg(tiles, a.generation, view));
  const TilingConstants c = a.compute ? compute_constants(a.generation) : golden_constants();
  Json j = to_json(c);
  j["tiles_drawn"] = tiles.size();
  ctx.write(a.out + ".constants.json", j);
}

void cmd_path(Context& ctx, const PathArgs& a) {
  const PathSample p = make_path(a.kind, a.steps, a.dt, ctx.seed);
  if (a.format != "csv" && a.format != "bin" && a.format != "both") throw InvalidArgument("--format is csv, bin or both");
  if (a.format != "bin") {
    std::ostringstream os;
    write_path_csv(os, p);
    ctx.write(a.out + ".csv", os.str());
  }
  if (a.format != "csv") {
    std::ostringstream os;
    write_path_binary(os, p);
    ctx.write(a.out + ".bin", os.str());
  }
}

void cmd_frontier(Context& ctx, const FrontierArgs& a) {
  const PathSample p = make_path(a.kind, a.steps, a.dt, ctx.seed);
  const RasterSet K = rasterize_path(p, a.eps);
  const FrontierResult f = frontier(K);
  ctx.write_pbm(K, a.out + ".pbm");
  ctx.write_pbm(f.frontier_cells, a.out + ".frontier.pbm");
  std::vector<std::string> head{"seed", "kind", "steps", "dt", "eps", "cells", "boundary_cells", "frontier_cells", "hole_count"};
  std::vector<std::string> row{std::to_string(ctx.seed), a.kind, std::to_string(p.steps()), fmt_double(p.dt), fmt_double(a.eps),
                               std::to_string(K.count()), std::to_string(f.boundary_cell_count),
                               std::to_string(f.frontier_cells.count()), std::to_string(f.hole_count)};
  if (a.scales > 0) {
    const DimEstimate d = frontier_dimension(p, dyadic_scales(a.eps, a.scales));
    head.insert(head.end(), {"dimension", "r2"});
    row.insert(row.end(), {fmt_double(d.slope), fmt_double(d.r2)});
  }
  CsvWriter csv(head);
  csv.row(row);
  ctx.write(a.out + ".csv", csv.str());
  if (a.svg) ctx.write(a.out + ".svg", frontier_svg(K, f.frontier_cells));
}

void cmd_whitney(Context& ctx, const WhitneyArgs& a) {
  WhitneyGrowthConfig cfg = a.cfg;
  cfg.set = test_set_from_string(a.set);
  std::vector<TileAddress> tiles;
  std::optional<CellList> input;
  if (!a.input.empty()) input = read_pbm(a.input).to_list();
  const WhitneyGrowthReport rep = whitney_growth_experiment(cfg, ctx.seed, input ? &*input : nullptr, &tiles);
  ctx.write(a.out + ".tree.json", to_json(rep.tree));
  ctx.write(a.out + ".json", to_json(rep));
  CsvWriter csv({"level", "a", "b"});
  for (const TileAddress& t : tiles) csv.row({std::to_string(t.level), std::to_string(t.a), std::to_string(t.b)});
  ctx.write(a.out + ".tiles.csv", csv.str());

  // Overlay: tiles up to one stride below the root, inside the root's lambda^5 disk.
  const Point c = center(rep.tree.root);
  const double R = 0.5 * blowup_factor(5) * diameter(rep.tree.root);
  const ViewBox view{c.x - R, c.y - R, c.x + R, c.y + R};
  std::vector<TileAddress> shown;
  for (const TileAddress& t : tiles) {
    const Point p = center(t);
    if (t.level <= rep.tree.root.level + rep.tree.h && std::abs(p.x - c.x) <= R && std::abs(p.y - c.y) <= R) shown.push_back(t);
  }
  if (shown.size() > 50'000) shown.resize(50'000);
  ctx.write(a.out + ".svg", whitney_svg(shown, nullptr, view));
}

void cmd_beta(Context& ctx, const BetaArgs& a) {
  const std::vector<Point> E = beta_input(a.set, a.points, a.steps, a.dt, a.generation, ctx.seed);
  Json score;
  if (!a.tiles) {
    const BetaAtlas atlas = tst_sum(E, a.jmax);
    ctx.write(a.out + ".csv", beta_atlas_csv(atlas));
    score = {{"diam", atlas.diam_E}, {"sum", atlas.sum}, {"j_max", atlas.j_max}};
  } else {
    const double dE = set_diameter(E);
    if (dE == 0.0) throw InvalidArgument("set has zero diameter");
    const double r = a.r > 0.0 ? a.r : dE / 64.0;
    const TileLevels lv = tile_floor_levels(dE, r);
    CsvWriter csv({"level", "i", "k", "beta", "diam"});
    double sum = dE;
    if (lv.hi >= lv.lo) {
      for (const TileAddress& G : blowup_cover(E, lv.lo, lv.hi)) {
        const double b = tile_beta(E, G);
        sum += b * b * diameter(G);
        csv.row({std::to_string(G.level), std::to_string(G.a), std::to_string(G.b), fmt_double(b), fmt_double(diameter(G))});
      }
    }
    ctx.write(a.out + ".csv", csv.str());
    score = {{"diam", dE}, {"sum", sum}, {"j_max", lv.hi}};
  }
  ctx.write(a.out + ".json", score);
}

void stats_box(Context& ctx, const StatsArgs& a, const Command& cmd) {
  if (a.input.empty()) throw InvalidArgument("stats box needs --input <pbm>");
  const RasterSet K = read_pbm(a.input);
  const double eps0 = a.eps0 > 0.0 ? a.eps0 : K.eps();
  const DimEstimate d = box_dimension(K, dyadic_scales(eps0, a.scales));
  Json params = params_json(cmd);
  params["r2"] = d.r2;
  ctx.write(a.out + ".json", estimator_json(d.slope, {d.ci_lo, d.ci_hi}, d.scales.size(), ctx.seed, params));
  CsvWriter csv({"eps", "count"});
  for (std::size_t k = 0; k < d.scales.size(); ++k) csv.row({fmt_double(d.scales[k]), std::to_string(d.counts[k])});
  ctx.write(a.out + ".csv", csv.str());
}

void stats_extinction(Context& ctx, const StatsArgs& a, const Command& cmd) {
  const BranchingSpec spec{a.m, a.M, a.b, 0.5, 2.0};
  const double q = extinction_prob(spec);
  std::vector<std::uint8_t> per_run;
  const BranchingSim sim = simulate_branching(spec, a.runs, ctx.seed, a.generations, 10'000, Exec::parallel, &per_run);
  Json params = params_json(cmd);
  params["q_solver"] = q;
  ctx.write(a.out + ".json", estimator_json(sim.q_hat(), wilson_interval(sim.extinct, sim.runs), sim.runs, ctx.seed, params));
  CsvWriter csv({"run", "extinct"});
  for (std::size_t k = 0; k < per_run.size(); ++k) csv.row({std::to_string(k), std::to_string(per_run[k])});
  ctx.write(a.out + ".csv", csv.str());
}

void stats_percolate(Context& ctx, const StatsArgs& a, const Command& cmd) {
  if (a.D < 1 || a.depth < 1) throw InvalidArgument("--D and --depth must be >= 1");
  std::vector<PercolationResult> res(a.trials);
  const auto n = static_cast<std::int64_t>(a.trials);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n; ++k)
    res[static_cast<std::size_t>(k)] = percolate_regular(a.D, a.depth, a.p, derive_seed(ctx.seed, static_cast<std::uint64_t>(k)));
  std::size_t survived = 0;
  for (const auto& r : res) survived += r.survived ? 1 : 0;
  Json params = params_json(cmd);
  const double q_psi = extinction_prob({0, a.D, a.D * a.p, a.p, 2.0});
  params["survival_psi_oracle"] = 1.0 - q_psi;
  params["survival_binomial_exact"] = 1.0 - binomial_extinction_by(a.D, a.p, a.depth);
  const double freq = a.trials ? static_cast<double>(survived) / static_cast<double>(a.trials) : 0.0;
  ctx.write(a.out + ".json", estimator_json(freq, wilson_interval(survived, a.trials), a.trials, ctx.seed, params));
  CsvWriter csv({"trial", "component_size", "depth_reached", "survived"});
  for (std::size_t k = 0; k < res.size(); ++k)
    csv.row({std::to_string(k), std::to_string(res[k].component_size), std::to_string(res[k].depth_reached),
             std::to_string(res[k].survived ? 1 : 0)});
  ctx.write(a.out + ".csv", csv.str());
}

void stats_surround(Context& ctx, const StatsArgs& a, const Command& cmd) {
  SurroundOptions o;
  if (a.regime == "core") {
    o.regime = StartRegime::core;
  } else if (a.regime == "origin") {
    o.regime = StartRegime::origin;
  } else {
    throw InvalidArgument("--regime is core or origin");
  }
  std::vector<SurroundVerdict> v;
  const ProbEstimate e = surround_prob_mc(a.eta, a.r, a.trials, ctx.seed, o, &v);
  Json params = params_json(cmd);
  params["surrounded"] = e.surrounded;
  params["missed"] = e.missed;
  ctx.write(a.out + ".json", estimator_json(e.estimate, e.ci, e.trials, ctx.seed, params));
  CsvWriter csv({"trial", "surrounds", "hits_core", "event"});
  for (std::size_t k = 0; k < v.size(); ++k)
    csv.row({std::to_string(k), std::to_string(v[k].surrounds ? 1 : 0), std::to_string(v[k].hits ? 1 : 0),
             std::to_string(v[k].event() ? 1 : 0)});
  ctx.write(a.out + ".csv", csv.str());
}

void stats_fit(Context& ctx, const StatsArgs& a, const Command& cmd) {
  if (a.input.empty()) throw InvalidArgument("stats fit needs --input <csv with x,y columns>");
  std::istringstream in(read_text(a.input));
  std::string line;
  std::vector<double> x, y;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() < 2) throw InvalidArgument(a.input + ": expected two columns");
    try {
      const double xv = std::stod(cells[0]), yv = std::stod(cells[1]);
      x.push_back(a.loglog ? std::log(xv) : xv);
      y.push_back(a.loglog ? std::log(yv) : yv);
    } catch (const std::exception&) {
      if (!header) throw InvalidArgument(a.input + ": bad row '" + line + "'");
    }
    header = false;
  }
  const LineFit f = fit_line(x, y);
  Json params = params_json(cmd);
  params["intercept"] = f.intercept;
  params["r2"] = f.r2;
  params["slope_se"] = f.slope_se;
  ctx.write(a.out + ".json", estimator_json(f.slope, {f.ci_lo, f.ci_hi}, f.n, ctx.seed, params));
  CsvWriter csv({"x", "y", "fitted"});
  for (std::size_t k = 0; k < x.size(); ++k)
    csv.row({fmt_double(x[k]), fmt_double(y[k]), fmt_double(f.intercept + f.slope * x[k])});
  ctx.write(a.out + ".csv", csv.str());
}

void cmd_experiment(Context& ctx, const ExperimentArgs& a) {
  const ExperimentOutput r = run_experiment(a.name, parse_kv(a.params), ctx.seed);
  ctx.write(a.out + ".json", r.report);
  ctx.write(a.out + ".csv", r.csv);
}

// ---------------------------------------------------------------- driver

struct Cli {
  CLI::App app{"Gosper tilings, Whitney trees, beta numbers and Brownian frontier experiments", "flab"};
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string replay;
  std::vector<std::unique_ptr<Command>> commands;
  Context ctx;

  TilingArgs tiling;
  PathArgs path;
  FrontierArgs front;
  WhitneyArgs whit;
  BetaArgs beta;
  StatsArgs stats;
  ExperimentArgs exp;

  Command& add(CLI::App* sub, const std::string& path_name) {
    commands.push_back(std::make_unique<Command>(sub, path_name));
    return *commands.back();
  }

  Cli() {
    app.set_config("--config", "", "TOML-style key = value file; command-line flags override it");
    app.add_option("--seed", seed, "master seed")->envname("FRONTIERLAB_SEED")->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads (0 = OpenMP default)");
    app.add_option("--replay", replay, "re-run the command recorded in a manifest");
    app.require_subcommand(0, 1);

    {
      auto& c = add(app.add_subcommand("tiling", "render the tiling and write the tiling constants"), "tiling");
      c.opt("level", tiling.level, "tile level");
      c.opt("levels", tiling.levels, "number of consecutive levels drawn");
      c.opt("generation", tiling.generation, "boundary polygon generation");
      c.opt("window", tiling.window, "half-width of the square view");
      c.flag("compute", tiling.compute, "recompute constants at --generation instead of the stored values");
      c.opt("out", tiling.out, "output prefix");
      c.run = [this] { cmd_tiling(ctx, tiling); };
    }
    {
      auto& c = add(app.add_subcommand("path", "sample a path"), "path");
      c.opt("kind", path.kind, "bm, killed, bridge, bridge-reversed or srw");
      c.opt("steps", path.steps, "number of steps (killed: maximum)");
      c.opt("dt", path.dt, "time step (bm, killed)");
      c.opt("format", path.format, "csv, bin or both");
      c.opt("out", path.out, "output prefix");
      c.run = [this] { cmd_path(ctx, path); };
    }
    {
      auto& c = add(app.add_subcommand("frontier", "rasterize a path and extract its frontier"), "frontier");
      c.opt("kind", front.kind, "path kind");
      c.opt("steps", front.steps, "number of steps");
      c.opt("dt", front.dt, "time step");
      c.opt("eps", front.eps, "raster cell size");
      c.opt("scales", front.scales, "if > 0, fit the frontier dimension over this many dyadic scales from eps");
      c.flag("svg", front.svg, "also write an SVG overlay");
      c.opt("out", front.out, "output prefix");
      c.run = [this] { cmd_frontier(ctx, front); };
    }
    {
      auto& c = add(app.add_subcommand("whitney", "Whitney tiles and the pruned tree"), "whitney");
      c.opt("set", whit.set, "bm, circle or segment");
      c.opt("input", whit.input, "PBM raster to use instead of --set");
      c.opt("steps", whit.cfg.steps, "path steps (bm)");
      c.opt("dt", whit.cfg.dt, "time step (bm)");
      c.opt("eps", whit.cfg.eps, "raster cell size");
      c.opt("n-max", whit.cfg.n_max, "finest tile level");
      c.opt("stride", whit.cfg.h, "tree stride h (levels per generation)");
      c.opt("depth", whit.cfg.depth, "tree generations below the root");
      c.opt("root-level", whit.cfg.root_level, "level of the root tile");
      c.opt("out", whit.out, "output prefix");
      c.run = [this] { cmd_whitney(ctx, whit); };
    }
    {
      auto& c = add(app.add_subcommand("beta", "beta numbers and the traveling-salesman sum"), "beta");
      c.opt("set", beta.set, "circle, segment, bm or gosper");
      c.opt("points", beta.points, "sample points (circle, segment)");
      c.opt("steps", beta.steps, "path steps (bm)");
      c.opt("dt", beta.dt, "time step (bm)");
      c.opt("generation", beta.generation, "boundary generation (gosper)");
      c.opt("jmax", beta.jmax, "finest dyadic level");
      c.flag("tiles", beta.tiles, "use lambda^5 tile blow-ups instead of dyadic squares");
      c.opt("r", beta.r, "smallest tile diameter with --tiles (default diam/64)");
      c.opt("out", beta.out, "output prefix");
      c.run = [this] { cmd_beta(ctx, beta); };
    }
    {
      CLI::App* st = app.add_subcommand("stats", "estimators");
      st->require_subcommand(1);
      {
        auto& c = add(st->add_subcommand("box", "box-counting dimension of a PBM raster"), "stats box");
        c.opt("input", stats.input, "PBM raster");
        c.opt("eps0", stats.eps0, "finest box (default: raster cell)");
        c.opt("scales", stats.scales, "dyadic scales");
        c.opt("out", stats.out, "output prefix");
        c.run = [this] { stats_box(ctx, stats, *ctx.active); };
      }
      {
        auto& c = add(st->add_subcommand("extinction", "extinction probability: solver and simulation"), "stats extinction");
        c.opt("m", stats.m, "minimum offspring");
        c.opt("M", stats.M, "maximum offspring");
        c.opt("b", stats.b, "mean offspring bound");
        c.opt("runs", stats.runs, "simulated runs");
        c.opt("generations", stats.generations, "generation limit per run");
        c.opt("out", stats.out, "output prefix");
        c.run = [this] { stats_extinction(ctx, stats, *ctx.active); };
      }
      {
        auto& c = add(st->add_subcommand("percolate", "edge percolation on a D-ary tree"), "stats percolate");
        c.opt("D", stats.D, "branching number");
        c.opt("depth", stats.depth, "tree depth");
        c.opt("p", stats.p, "edge retention probability");
        c.opt("trials", stats.trials, "trials");
        c.opt("out", stats.out, "output prefix");
        c.run = [this] { stats_percolate(ctx, stats, *ctx.active); };
      }
      {
        auto& c = add(st->add_subcommand("surround", "surround-or-miss probability"), "stats surround");
        c.opt("eta", stats.eta, "core margin");
        c.opt("r", stats.r, "tile diameter");
        c.opt("trials", stats.trials, "trials");
        c.opt("regime", stats.regime, "core or origin");
        c.opt("out", stats.out, "output prefix");
        c.run = [this] { stats_surround(ctx, stats, *ctx.active); };
      }
      {
        auto& c = add(st->add_subcommand("fit", "least-squares line through a two-column CSV"), "stats fit");
        c.opt("input", stats.input, "CSV file");
        c.flag("loglog", stats.loglog, "fit log y against log x");
        c.opt("out", stats.out, "output prefix");
        c.run = [this] { stats_fit(ctx, stats, *ctx.active); };
      }
    }
    {
      auto& c = add(app.add_subcommand("experiment", "named experiment"), "experiment");
      c.app()->add_option("name", exp.name, "frontier-dim, srw-exponent, surround-c0, whitney-growth or tst-circle")->required();
      c.multi("param", exp.params, "config override key=value (repeatable)");
      c.opt("out", exp.out, "output prefix");
      c.run = [this] { cmd_experiment(ctx, exp); };
    }
  }

  const Command* selected() const {
    const Command* best = nullptr;
    for (const auto& c : commands)
      if (c->app()->parsed() && (!best || c->path().size() > best->path().size())) best = c.get();
    return best;
  }
};

std::vector<std::string> replay_args(const RunManifest& m) {
  std::vector<std::string> args = split(m.command, ' ');
  // The experiment name is positional.
  auto it = m.params.find("name");
  if (args.size() == 1 && args[0] == "experiment" && it != m.params.end()) args.push_back(it->second);
  for (const auto& [k, v] : m.params) {
    if (k == "name" && m.command == "experiment") continue;
    if (v == "true" || v == "false") {
      if (v == "true") args.push_back("--" + k);
      continue;
    }
    if (k == "param") {
      for (const auto& item : split(v, ';')) args.insert(args.end(), {"--" + k, item});
      continue;
    }
    if (v.empty()) continue;
    args.insert(args.end(), {"--" + k, v});
  }
  args.insert(args.begin(), {"--seed", std::to_string(m.seed)});
  return args;
}

int run_cli(std::vector<std::string> argv_rest, bool from_replay);

int execute(Cli& cli) {
  if (cli.jobs > 0) omp_set_num_threads(cli.jobs);
  if (!cli.replay.empty()) {
    const RunManifest m = RunManifest::from_json(read_json(cli.replay));
    if (m.constants_version != golden::kVersion) {
      std::cerr << "warning: manifest was written with constants version " << m.constants_version << "\n";
    }
    auto args = replay_args(m);
    if (cli.jobs > 0) args.insert(args.begin(), {"--jobs", std::to_string(cli.jobs)});
    return run_cli(args, true);
  }
  const Command* cmd = cli.selected();
  if (!cmd || !cmd->run) {
    std::cerr << cli.app.help();
    return 2;
  }
  cli.ctx.seed = cli.seed;
  cli.ctx.active = cmd;
  const auto t0 = std::chrono::steady_clock::now();
  cmd->run();
  RunManifest m;
  m.command = cmd->path();
  m.params = cmd->snapshot();
  if (m.command == "experiment") m.params["name"] = cli.exp.name;
  m.seed = cli.seed;
  m.constants_version = golden::kVersion;
  m.outputs = cli.ctx.outputs;
  m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string prefix = m.params.count("out") ? m.params.at("out") : "flab";
  write_json(prefix + ".manifest.json", m.to_json());
  return 0;
}

int run_cli(std::vector<std::string> args, bool from_replay) {
  Cli cli;
  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    cli.app.parse(args);
    if (from_replay && !cli.replay.empty()) throw InvalidArgument("a replayed manifest cannot itself request --replay");
    return execute(cli);
  } catch (const CLI::CallForHelp& e) {
    return cli.app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.app.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.app.exit(e);
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "flab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "flab: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, false);
}
