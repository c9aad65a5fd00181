#include "flab/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>

#include "flab/error.hpp"
#include "flab/fit.hpp"

namespace flab {

namespace {

double level_diameter(int level) { return std::pow(gosper::kAbsLambda, -level); }

int region_generation(double diam, double eps) {
  return std::min(gosper::generation_for(diam, 0.5 * eps), gosper::kMaxMembershipGeneration);
}

bool roi_ok(const std::optional<Disk>& roi, const TileAddress& t) {
  if (!roi) return true;
  const double r5 = 0.5 * blowup_factor(5) * diameter(t);
  return distance(center(t), roi->center) <= r5 + roi->radius;
}

// Level-n lattice points whose centers fall in [x0, x1] x [y0, y1].
std::vector<TileAddress> lattice_in_box(int level, double x0, double y0, double x1, double y1,
                                        std::size_t limit) {
  const TileFrame unit = TileFrame::of(TileAddress{level, 0, 0});
  double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
  for (const Point p : {Point{x0, y0}, Point{x1, y0}, Point{x0, y1}, Point{x1, y1}}) {
    const Complex w = to_complex(p) / unit.scale;
    const double b = w.imag() * 2.0 / gosper::kSqrt3;
    const double a = w.real() - 0.5 * b;
    amin = std::min(amin, a);
    amax = std::max(amax, a);
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
  }
  const double span = (amax - amin + 3.0) * (bmax - bmin + 3.0);
  if (span > 4.0 * static_cast<double>(limit)) {
    throw CapacityError("level " + std::to_string(level) + " lattice enumeration too large; raise n_min");
  }
  std::vector<TileAddress> out;
  for (auto b = static_cast<std::int64_t>(std::floor(bmin)) - 1; b <= static_cast<std::int64_t>(std::ceil(bmax)) + 1; ++b) {
    for (auto a = static_cast<std::int64_t>(std::floor(amin)) - 1; a <= static_cast<std::int64_t>(std::ceil(amax)) + 1; ++a) {
      const TileAddress t{level, a, b};
      const Point c = center(t);
      if (c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1) out.push_back(t);
    }
  }
  return out;
}

const std::vector<Complex>& raw_polygon_cached(int g) {
  static std::once_flag flags[7];
  static std::vector<Complex> table[7];
  const int k = std::clamp(g, 0, 6);
  std::call_once(flags[k], [k] { table[k] = raw_boundary_polygon(k); });
  return table[k];
}

// Region a inside region b, by disks and a's boundary vertices.
bool region_inside(const Region& a, const Region& b, int g) {
  const double d = distance(a.center(), b.center());
  if (d + a.circumradius() <= b.inradius()) return true;
  if (d - a.circumradius() > b.circumradius()) return false;
  if (!b.contains(a.center())) return false;
  for (const Complex& w : raw_polygon_cached(g)) {
    if (!b.contains(a.frame.from_raw(w))) return false;
  }
  return true;
}

bool adjacent_to(const TileAddress& fine, const TileAddress& coarse) {
  for (const TileAddress& x : neighbors(fine)) {
    if (ancestor(x, coarse.level) == coarse) return true;
  }
  return false;
}

void descend_adjacent(const WhitneyDecomposition& W, const TileAddress& N, const TileAddress& T,
                      std::vector<TileAddress>& out) {
  for (const TileAddress& c : children(N)) {
    if (!adjacent_to(c, T)) continue;
    if (W.contains(c)) {
      out.push_back(c);
    } else if (c.level < W.n_max) {
      descend_adjacent(W, c, T, out);
    }
  }
}

bool scanline_less(const TileAddress& a, const TileAddress& b) {
  const Point pa = center(a), pb = center(b);
  if (pa.y != pb.y) return pa.y < pb.y;
  if (pa.x != pb.x) return pa.x < pb.x;
  return a < b;
}

}  // namespace

double blowup_factor(int k) { return std::pow(gosper::kAbsLambda, k); }

std::vector<TileAddress> WhitneyDecomposition::at_level(int n) const {
  std::vector<TileAddress> out;
  for (const TileAddress& t : tiles)
    if (t.level == n) out.push_back(t);
  return out;
}

bool blowup_hits(const CellIndex& K, const TileAddress& tile, int k) {
  const double diam = blowup_factor(k) * diameter(tile);
  const Region r = lambda_blow_up(tile, k, region_generation(diam, K.grid().eps));
  return K.any_center_in(r);
}

WhitneyDecomposition whitney_tiles(std::shared_ptr<const CellIndex> K, int n_min, int n_max,
                                   const WhitneyOptions& opts) {
  if (!K || K->empty()) throw InvalidArgument("whitney_tiles needs a nonempty K");
  if (n_max < n_min) throw InvalidArgument("whitney_tiles needs n_min <= n_max");
  const double eps = K->grid().eps;
  if (level_diameter(n_max) < 4.0 * eps) {
    throw ResolutionError("tiles at level " + std::to_string(n_max) + " are below 4 raster cells");
  }
  const double theta = blowup_factor(1);
  WhitneyDecomposition W;
  W.n_min = n_min;
  W.n_max = n_max;
  W.source = K;
  W.roi = opts.roi;

  // Hitting tiles one level above the range.
  const int s = n_min - 1;
  const CellBox kb = K->bbox();
  const Grid& g = K->grid();
  const double r1 = 0.5 * theta * level_diameter(s) + 2.0 * eps;
  double x0 = g.origin.x + kb.i0 * eps - r1, x1 = g.origin.x + (kb.i1 + 1) * eps + r1;
  double y0 = g.origin.y + kb.j0 * eps - r1, y1 = g.origin.y + (kb.j1 + 1) * eps + r1;
  if (opts.roi) {
    const double r5 = 0.5 * blowup_factor(5) * level_diameter(s) + opts.roi->radius;
    x0 = std::max(x0, opts.roi->center.x - r5);
    x1 = std::min(x1, opts.roi->center.x + r5);
    y0 = std::max(y0, opts.roi->center.y - r5);
    y1 = std::min(y1, opts.roi->center.y + r5);
  }
  std::vector<TileAddress> hitting;
  if (x0 <= x1 && y0 <= y1) {
    const auto start = lattice_in_box(s, x0, y0, x1, y1, opts.max_tiles);
    std::vector<std::uint8_t> keep(start.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(start.size()); ++k) {
      const auto& t = start[static_cast<std::size_t>(k)];
      keep[static_cast<std::size_t>(k)] = roi_ok(opts.roi, t) && blowup_hits(*K, t, 1);
    }
    for (std::size_t k = 0; k < start.size(); ++k)
      if (keep[k]) hitting.push_back(start[k]);
  }

  for (int n = n_min; n <= n_max; ++n) {
    std::vector<TileAddress> kids;
    kids.reserve(hitting.size() * 7);
    for (const TileAddress& h : hitting)
      for (const TileAddress& c : children(h)) kids.push_back(c);
    // 0 = outside roi, 1 = Whitney, 2 = hitting
    std::vector<std::uint8_t> kind(kids.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(kids.size()); ++k) {
      const auto& t = kids[static_cast<std::size_t>(k)];
      kind[static_cast<std::size_t>(k)] = !roi_ok(opts.roi, t) ? 0 : (blowup_hits(*K, t, 1) ? 2 : 1);
    }
    hitting.clear();
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (kind[k] == 1) W.tiles.push_back(kids[k]);
      if (kind[k] == 2) hitting.push_back(kids[k]);
    }
    if (hitting.size() > opts.max_tiles || W.tiles.size() > 8 * opts.max_tiles) {
      throw CapacityError("Whitney decomposition exceeds the tile limit at level " + std::to_string(n));
    }
  }
  std::sort(W.tiles.begin(), W.tiles.end());
  W.index.reserve(W.tiles.size());
  W.index.insert(W.tiles.begin(), W.tiles.end());
  return W;
}

std::vector<TileAddress> adjacent_tiles(const WhitneyDecomposition& W, const TileAddress& T) {
  std::vector<TileAddress> out;
  for (const TileAddress& N : neighbors(T)) {
    bool found = false;
    for (TileAddress A = N; A.level >= W.n_min; A = parent(A)) {
      if (W.contains(A)) {
        out.push_back(A);
        found = true;
        break;
      }
    }
    if (!found && N.level < W.n_max) descend_adjacent(W, N, T, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LevelGapReport level_gaps(const WhitneyDecomposition& W) {
  std::size_t pairs = 0, violations = 0;
  int max_gap = 0;
  const auto n = static_cast<std::int64_t>(W.tiles.size());
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : pairs, violations) reduction(max : max_gap)
  for (std::int64_t k = 0; k < n; ++k) {
    const TileAddress& T = W.tiles[static_cast<std::size_t>(k)];
    for (const TileAddress& U : adjacent_tiles(W, T)) {
      if (!(T < U)) continue;
      const int gap = std::abs(T.level - U.level);
      ++pairs;
      if (gap > 1) ++violations;
      max_gap = std::max(max_gap, gap);
    }
  }
  return {pairs, violations, max_gap};
}

bool tile_inside(const TileAddress& tile, const Region& region, int generation) {
  return region_inside(Region{TileFrame::of(tile), generation}, region, generation);
}

bool regions_disjoint(const Region& a, const Region& b, int generation) {
  const double d = distance(a.center(), b.center());
  if (d > a.circumradius() + b.circumradius()) return true;
  if (d < a.inradius() + b.inradius()) return false;
  if (b.contains(a.center()) || a.contains(b.center())) return false;
  for (const Complex& w : raw_polygon_cached(generation)) {
    if (b.contains(a.frame.from_raw(w))) return false;
    if (a.contains(b.frame.from_raw(w))) return false;
  }
  return true;
}

ChainComponent chain_component(const WhitneyDecomposition& W, const TileAddress& G, std::size_t max_tiles) {
  if (!W.contains(G)) throw InvalidArgument("chain_component: " + to_string(G) + " is not a Whitney tile");
  std::unordered_set<TileAddress, TileAddressHash> seen{G};
  std::deque<TileAddress> queue{G};
  ChainComponent out;
  while (!queue.empty()) {
    const TileAddress cur = queue.front();
    queue.pop_front();
    out.tiles.push_back(cur);
    for (const TileAddress& U : adjacent_tiles(W, cur)) {
      if (U.level < cur.level || seen.count(U)) continue;
      seen.insert(U);
      if (!blowup_within(U, 0, G, 5)) continue;
      if (seen.size() > max_tiles) {
        out.complete = false;
        break;
      }
      queue.push_back(U);
    }
    if (!out.complete) break;
  }
  std::sort(out.tiles.begin(), out.tiles.end());
  return out;
}

std::vector<TileAddress> wall(const ChainComponent& C, int n) {
  std::vector<TileAddress> out;
  for (const TileAddress& t : C.tiles)
    if (t.level == n) out.push_back(t);
  return out;
}

std::vector<TileAddress> wall(const WhitneyDecomposition& W, const TileAddress& G, int n) {
  return wall(chain_component(W, G), n);
}

bool wall_separates(const WhitneyDecomposition& W, const TileAddress& G, int n, double eps) {
  const ChainComponent C = chain_component(W, G);
  const auto wl = wall(C, n);
  const std::unordered_set<TileAddress, TileAddressHash> wall_set(wl.begin(), wl.end());
  const Region r5 = lambda_blow_up(G, 5, region_generation(blowup_factor(5) * diameter(G), eps));
  const Region g1 = blow_up(G, 1.0, region_generation(diameter(G), eps));
  const Grid grid{eps, r5.center()};
  const double R = r5.circumradius() + eps;
  const auto half = static_cast<std::int64_t>(std::ceil(R / eps));
  const std::int64_t w = 2 * half + 1;
  if (static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(w) > kDefaultMaxCells) {
    throw CapacityError("wall separation raster too large");
  }
  const CellIndex& K = *W.source;
  const double probe = eps * 0.70710678118654752;
  // 0 = open, 1 = barrier, 2 = K, 3 = seed (inside G)
  std::vector<std::uint8_t> kind(static_cast<std::size_t>(w * w));
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t y = 0; y < w; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const Point p = grid.cell_center({x - half, y - half});
      std::uint8_t k = 0;
      if (!r5.contains(p)) {
        k = 1;
      } else if (wall_set.count(locate(p, n, 12, 0.0))) {
        k = 1;
      } else if (K.any_center_in_disk(p, probe)) {
        k = 2;
      } else if (g1.contains(p)) {
        k = 3;
      }
      kind[static_cast<std::size_t>(y * w + x)] = k;
    }
  }
  std::vector<std::uint8_t> seen(kind.size(), 0);
  std::vector<std::int64_t> stack;
  for (std::size_t p = 0; p < kind.size(); ++p)
    if (kind[p] == 3) {
      seen[p] = 1;
      stack.push_back(static_cast<std::int64_t>(p));
    }
  while (!stack.empty()) {
    const std::int64_t p = stack.back();
    stack.pop_back();
    if (kind[static_cast<std::size_t>(p)] == 2) return false;
    const std::int64_t x = p % w, y = p / w;
    const std::int64_t nb[4] = {x > 0 ? p - 1 : -1, x + 1 < w ? p + 1 : -1, y > 0 ? p - w : -1,
                                y + 1 < w ? p + w : -1};
    for (std::int64_t q : nb) {
      if (q < 0) continue;
      const auto qi = static_cast<std::size_t>(q);
      if (!seen[qi] && kind[qi] != 1) {
        seen[qi] = 1;
        stack.push_back(q);
      }
    }
  }
  return true;
}

std::vector<std::size_t> WhitneyTree::counts() const {
  std::vector<std::size_t> out;
  for (const auto& g : generations) out.push_back(g.size());
  return out;
}

std::size_t WhitneyTree::complete_generations() const {
  std::size_t k = 0;
  while (k < generations.size() && !generations[k].empty()) ++k;
  return k;
}

namespace {

bool check_root_hypothesis(const WhitneyDecomposition& W, const TileAddress& root) {
  const Region r5root = lambda_blow_up(root, 5);
  for (int L = root.level - 1; L >= std::max(W.n_min, root.level - 8); --L) {
    for (const TileAddress& U : W.at_level(L)) {
      const Region r5u = lambda_blow_up(U, 5);
      if (distance(center(U), center(root)) > r5u.circumradius()) continue;
      if (tile_inside(U, r5root)) continue;
      if (!tile_inside(root, r5u)) continue;
      const ChainComponent C = chain_component(W, U, 200'000);
      if (std::binary_search(C.tiles.begin(), C.tiles.end(), root)) return true;
    }
  }
  return false;
}

}  // namespace

WhitneyTree build_tree(const WhitneyDecomposition& W, const TileAddress& root, int h, int depth,
                       const TreeOptions& opts) {
  if (h < 1) throw InvalidArgument("tree stride h must be >= 1");
  if (depth < 0) throw InvalidArgument("tree depth must be >= 0");
  if (!W.contains(root)) throw InvalidArgument("tree root " + to_string(root) + " is not a Whitney tile");
  if (root.level + h * depth > W.n_max) {
    throw InvalidArgument("decomposition stops at level " + std::to_string(W.n_max) + "; tree needs " +
                          std::to_string(root.level + h * depth));
  }
  if (!W.source->any_center_outside(lambda_blow_up(root, 5))) {
    throw InvalidArgument("lambda^5 blow-up of the root contains all of K");
  }
  WhitneyTree T;
  T.root = root;
  T.h = h;
  T.generations.push_back({TreeNode{root, -1, 0, 0}});
  if (opts.check_root) T.root_hypothesis = check_root_hypothesis(W, root);

  for (int k = 1; k <= depth; ++k) {
    auto& prev = T.generations.back();
    const auto np = static_cast<std::int64_t>(prev.size());
    std::vector<std::vector<TileAddress>> picked(prev.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < np; ++i) {
      TreeNode& node = prev[static_cast<std::size_t>(i)];
      const TileAddress& G = node.tile;
      const int lvl = G.level + h;
      std::vector<TileAddress> cands;
      for (const TileAddress& D : wall(chain_component(W, G), lvl)) {
        if (blowup_within(D, 5, G, 5)) cands.push_back(D);
      }
      std::sort(cands.begin(), cands.end(), scanline_less);
      std::vector<TileAddress>& taken = picked[static_cast<std::size_t>(i)];
      for (const TileAddress& D : cands) {
        const bool ok = std::none_of(taken.begin(), taken.end(),
                                     [&](const TileAddress& o) { return blowups_meet(D, o, 6); });
        if (ok) taken.push_back(D);
      }
      node.candidates = cands.size();
      node.children = picked[static_cast<std::size_t>(i)].size();
    }
    std::vector<TreeNode> next;
    for (std::size_t i = 0; i < picked.size(); ++i)
      for (const TileAddress& D : picked[i]) next.push_back({D, static_cast<int>(i), 0, 0});
    const bool dead = next.empty();
    T.generations.push_back(std::move(next));
    if (dead) break;
  }
  return T;
}

WhitneyTree regular_tree(int D, int depth, int h) {
  if (D < 1 || depth < 0 || h < 1) throw InvalidArgument("regular_tree needs D >= 1, depth >= 0, h >= 1");
  const double total = std::pow(static_cast<double>(D), depth);
  if (total > 2e7) throw CapacityError("regular tree too large to materialize");
  WhitneyTree T;
  T.h = h;
  T.root = {0, 0, 0};
  T.generations.push_back({TreeNode{T.root, -1, 0, 0}});
  for (int k = 1; k <= depth; ++k) {
    auto& prev = T.generations.back();
    std::vector<TreeNode> next;
    next.reserve(prev.size() * static_cast<std::size_t>(D));
    for (std::size_t i = 0; i < prev.size(); ++i) {
      prev[i].candidates = prev[i].children = static_cast<std::size_t>(D);
      for (int c = 0; c < D; ++c) {
        next.push_back({TileAddress{k * h, static_cast<std::int64_t>(next.size()), 0}, static_cast<int>(i), 0, 0});
      }
    }
    T.generations.push_back(std::move(next));
  }
  return T;
}

GrowthEstimate growth_dimension(const std::vector<std::size_t>& counts, int h) {
  if (counts.size() < 3) throw InsufficientDepthError("growth_dimension needs at least 3 generations");
  if (h < 1) throw InvalidArgument("stride h must be >= 1");
  GrowthEstimate out;
  std::vector<double> logs;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] == 0 || counts[k - 1] == 0) {
      throw InsufficientDepthError("tree has no nodes at generation " + std::to_string(k));
    }
    const double r = static_cast<double>(counts[k]) / static_cast<double>(counts[k - 1]);
    out.branching.push_back(r);
    logs.push_back(std::log(r));
  }
  const double scale = h * gosper::kLogAbsLambda;
  const auto N = static_cast<double>(logs.size());
  double sum = 0.0;
  for (double l : logs) sum += l;
  out.estimate = sum / N / scale;
  double mean_loo = 0.0;
  std::vector<double> loo;
  for (double l : logs) loo.push_back((sum - l) / (N - 1.0));
  for (double v : loo) mean_loo += v / N;
  double var = 0.0;
  for (double v : loo) var += (v - mean_loo) * (v - mean_loo);
  var *= (N - 1.0) / N;
  const double se = std::sqrt(var) / scale;
  const double t = t_quantile(0.975, static_cast<int>(logs.size()) - 1);
  out.ci_lo = out.estimate - t * se;
  out.ci_hi = out.estimate + t * se;
  return out;
}

GrowthEstimate growth_dimension(const WhitneyTree& T) { return growth_dimension(T.counts(), T.h); }

}  // namespace flab
