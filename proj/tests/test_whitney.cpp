#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "flab/cell_index.hpp"
#include "flab/error.hpp"
#include "flab/golden.hpp"
#include "flab/whitney.hpp"

using namespace flab;

namespace {

std::shared_ptr<const CellIndex> circle_index(double radius, double eps, int n = 20000) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double a = 2 * M_PI * k / n;
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  CellList cells = rasterize_cells(pts, Grid{eps, {0, 0}}, true);
  cells.normalize();
  return std::make_shared<const CellIndex>(cells, true);
}

// Exact adjacency for tiles whose levels differ by at most one.
bool brute_adjacent(const TileAddress& x, const TileAddress& y) {
  if (x.level == y.level) return is_neighbor(x, y);
  const TileAddress& small = x.level > y.level ? x : y;
  const TileAddress& big = x.level > y.level ? y : x;
  if (small.level != big.level + 1 || is_within(small, big)) return false;
  for (const TileAddress& c : children(big))
    if (is_neighbor(c, small)) return true;
  return false;
}

// All level-L tiles of lambda^k (.) t, L = t.level, as lattice coordinates.
std::set<std::pair<std::int64_t, std::int64_t>> blowup_tiles(const TileAddress& t, int k) {
  std::vector<Eisenstein> pts{Eisenstein{0, 0}};
  for (int i = 0; i < k; ++i) {
    std::vector<Eisenstein> next;
    for (const Eisenstein& p : pts)
      for (const Eisenstein& d : kDigits) next.push_back(mul_lambda(p) + d);
    pts = next;
  }
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (const Eisenstein& p : pts) out.insert({p.a + t.a, p.b + t.b});
  return out;
}

struct CircleFixture {
  std::shared_ptr<const CellIndex> K = circle_index(0.5, 2.5e-4);
  WhitneyDecomposition W = [this] {
    WhitneyOptions o;
    o.roi = Disk{{0.5, 0.0}, 0.6};
    return whitney_tiles(K, 0, 7, o);
  }();
};

const CircleFixture& circle_fixture() {
  static const CircleFixture f;
  return f;
}

}  // namespace

TEST_SUITE("whitney_tree") {

TEST_CASE("exact blow-up predicates against lattice enumeration") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> co(-40, 40);
  int meets = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 3;
    const TileAddress a{k + 2, co(rng), co(rng)};
    const TileAddress b{k + 2, a.a + co(rng) / 2, a.b + co(rng) / 2};
    const auto A = blowup_tiles(a, k), B = blowup_tiles(b, k);
    bool brute = false;
    for (const auto& [x, y] : A) {
      if (B.count({x, y})) brute = true;
      for (const Eisenstein& u : kUnits)
        if (B.count({x + u.a, y + u.b})) brute = true;
      if (brute) break;
    }
    meets += brute;
    CHECK(blowups_meet(a, b, k) == brute);
  }
  CHECK(meets > 20);
  CHECK(meets < 280);

  const TileAddress t{2, 3, 4};
  CHECK(blowups_meet(t, t, 0));
  for (const auto& n : neighbors(t)) CHECK(blowups_meet(t, n, 0));
  CHECK_FALSE(blowups_meet(t, TileAddress{2, 5, 4}, 0));
}

TEST_CASE("exact containment matches the hierarchy") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::int64_t> co(-300, 300);
  for (int trial = 0; trial < 300; ++trial) {
    const TileAddress D{5, co(rng), co(rng)};
    const TileAddress A = ancestor(D, 3);
    CHECK(blowup_within(D, 0, A, 0));
    CHECK(blowup_within(parent(D), 1, D, 3));  // parent blow-up containment
    const TileAddress other = neighbors(A)[static_cast<std::size_t>(trial % 6)];
    CHECK_FALSE(blowup_within(D, 0, other, 0));
  }
}

TEST_CASE("single-cell K: Whitney tiles scale with their distance to K") {
  const Grid grid{1e-4, {0, 0}};
  CellList one{grid, {Cell{0, 0}}};
  auto K = std::make_shared<const CellIndex>(one, false);
  const WhitneyDecomposition W = whitney_tiles(K, 0, 4);
  REQUIRE(W.tiles.size() > 100);
  const Point k0 = grid.cell_center({0, 0});
  // lambda G misses K:   dist >= inradius(lambda G)
  // lambda parent(G) hits K: dist <= |c(G) - c(P)| + circumradius(lambda P)
  const double lo = golden::kInradius * gosper::kAbsLambda;
  const double hi = 0.5 * gosper::kAbsLambda + 0.5 * gosper::kAbsLambda * gosper::kAbsLambda;
  double rmin = 1e9, rmax = 0;
  for (const TileAddress& t : W.tiles) {
    const double d = distance(center(t), k0) / diameter(t);
    rmin = std::min(rmin, d);
    rmax = std::max(rmax, d);
    CHECK_FALSE(lambda_blow_up(t, 1, 12).contains(k0));
  }
  CHECK(rmin >= lo - 1e-3);
  CHECK(rmax <= hi + 1e-3);
  // Coarser tiles sit farther out.
  std::map<int, double> mean;
  std::map<int, int> cnt;
  for (const TileAddress& t : W.tiles) {
    mean[t.level] += distance(center(t), k0);
    ++cnt[t.level];
  }
  for (int n = 1; n <= 4; ++n) CHECK(mean[n] / cnt[n] < mean[n - 1] / cnt[n - 1]);
  CHECK(level_gaps(W).violations == 0);
}

TEST_CASE("resolution error for tiles finer than four cells") {
  CellList one{Grid{1e-2, {0, 0}}, {Cell{0, 0}}};
  auto K = std::make_shared<const CellIndex>(one, false);
  CHECK_THROWS_AS(whitney_tiles(K, 0, 6), ResolutionError);
}

TEST_CASE("circle: level gaps, blow-up misses K") {
  const auto& f = circle_fixture();
  const LevelGapReport g = level_gaps(f.W);
  CHECK(g.pairs > 1000);
  CHECK(g.violations == 0);
  CHECK(g.max_gap <= 1);
  for (std::size_t k = 0; k < f.W.tiles.size(); k += 37) {
    const TileAddress& t = f.W.tiles[k];
    CHECK_FALSE(blowup_hits(*f.K, t, 1));
    CHECK(blowup_hits(*f.K, parent(t), 1));
  }
}

TEST_CASE("circle: adjacency agrees with brute force") {
  const auto& f = circle_fixture();
  const auto lvl = f.W.at_level(5);
  REQUIRE(!lvl.empty());
  const TileAddress G = lvl[lvl.size() / 2];
  const auto adj = adjacent_tiles(f.W, G);
  std::set<TileAddress> got(adj.begin(), adj.end());
  for (const TileAddress& t : f.W.tiles) {
    if (std::abs(t.level - G.level) > 1 || t == G) continue;
    if (distance(center(t), center(G)) > 2 * diameter({G.level - 1, 0, 0})) continue;
    CHECK(got.count(t) == static_cast<std::size_t>(brute_adjacent(G, t)));
  }
}

TEST_CASE("circle: chain component against exhaustive enumeration") {
  const auto& f = circle_fixture();
  int checked = 0;
  for (int level : {5, 6}) {
    const auto lvl = f.W.at_level(level);
    for (std::size_t pick = 0; pick < lvl.size() && checked < 4; pick += std::max<std::size_t>(1, lvl.size() / 3)) {
      const TileAddress G = lvl[pick];
      const ChainComponent C = chain_component(f.W, G);
      REQUIRE(C.complete);
      CHECK(std::binary_search(C.tiles.begin(), C.tiles.end(), G));
      for (const TileAddress& t : C.tiles) CHECK(blowup_within(t, 0, G, 5));

      std::vector<TileAddress> pool;
      for (const TileAddress& t : f.W.tiles)
        if (t.level >= G.level && blowup_within(t, 0, G, 5)) pool.push_back(t);
      if (pool.size() > 1000) continue;
      std::set<TileAddress> seen{G};
      std::deque<TileAddress> q{G};
      while (!q.empty()) {
        const TileAddress cur = q.front();
        q.pop_front();
        for (const TileAddress& t : pool)
          if (t.level >= cur.level && !seen.count(t) && brute_adjacent(cur, t)) {
            seen.insert(t);
            q.push_back(t);
          }
      }
      CHECK(std::vector<TileAddress>(seen.begin(), seen.end()) == C.tiles);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("circle: walls") {
  const auto& f = circle_fixture();
  auto lvl = f.W.at_level(6);
  REQUIRE(!lvl.empty());
  const TileAddress G = *std::min_element(lvl.begin(), lvl.end(), [](const TileAddress& a, const TileAddress& b) {
    return distance(center(a), {0.5, 0}) < distance(center(b), {0.5, 0});
  });
  const ChainComponent C = chain_component(f.W, G);
  const auto w0 = wall(C, G.level);
  CHECK(std::find(w0.begin(), w0.end(), G) != w0.end());
  if (w0.size() == 1) CHECK(w0.front() == G);
  for (int n = G.level + 1; n <= f.W.n_max; ++n) {
    INFO("n = " << n);
    CHECK(wall_separates(f.W, G, n, 2.5e-4));
  }
}

TEST_CASE("tree invariants on a circle") {
  const auto& f = circle_fixture();
  auto roots = f.W.at_level(5);
  REQUIRE(!roots.empty());
  std::sort(roots.begin(), roots.end(), [](const TileAddress& a, const TileAddress& b) {
    return distance(center(a), {0.5, 0}) < distance(center(b), {0.5, 0});
  });
  const WhitneyTree T = build_tree(f.W, roots.front(), 1, 2);
  CHECK(T.generations.size() == 3);
  for (std::size_t g = 0; g < T.generations.size(); ++g)
    for (const TreeNode& n : T.generations[g]) CHECK(n.tile.level == T.root.level + static_cast<int>(g) * T.h);
  const double bound = std::pow(gosper::kAbsLambda, 14);
  for (std::size_t g = 0; g + 1 < T.generations.size(); ++g) {
    const auto& gen = T.generations[g];
    const auto& next = T.generations[g + 1];
    for (std::size_t i = 0; i < gen.size(); ++i) {
      CHECK(static_cast<double>(gen[i].candidates) <= bound * static_cast<double>(gen[i].children));
      std::vector<TileAddress> kids;
      for (const TreeNode& c : next)
        if (c.parent == static_cast<int>(i)) kids.push_back(c.tile);
      CHECK(kids.size() == gen[i].children);
      for (const TileAddress& d : kids) CHECK(blowup_within(d, 5, gen[i].tile, 5));
      for (std::size_t a = 0; a < kids.size(); ++a)
        for (std::size_t b = a + 1; b < kids.size(); ++b) {
          CHECK_FALSE(blowups_meet(kids[a], kids[b], 6));
          CHECK(regions_disjoint(lambda_blow_up(kids[a], 6, 6), lambda_blow_up(kids[b], 6, 6), 6));
        }
    }
  }
  // Determinism.
  const WhitneyTree T2 = build_tree(f.W, roots.front(), 1, 2);
  CHECK(T2.counts() == T.counts());
  for (std::size_t g = 0; g < T.generations.size(); ++g)
    for (std::size_t i = 0; i < T.generations[g].size(); ++i) CHECK(T2.generations[g][i].tile == T.generations[g][i].tile);
}

TEST_CASE("tree root must not swallow K") {
  const auto& f = circle_fixture();
  const auto coarse = f.W.at_level(0);
  if (!coarse.empty()) CHECK_THROWS_AS(build_tree(f.W, coarse.front(), 1, 1), InvalidArgument);
  CHECK_THROWS_AS(build_tree(f.W, TileAddress{3, 999999, 0}, 1, 1), InvalidArgument);
}

TEST_CASE("growth dimension estimator") {
  CHECK(growth_dimension(regular_tree(7, 4, 1)).estimate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(growth_dimension(regular_tree(1, 4, 3)).estimate == doctest::Approx(0.0));
  const GrowthEstimate b = growth_dimension(regular_tree(2, 5, 2));
  CHECK(b.estimate == doctest::Approx(std::log(2.0) / (2 * std::log(std::sqrt(7.0)))).epsilon(1e-12));
  CHECK(b.estimate == doctest::Approx(0.3562).epsilon(1e-3));
  CHECK(b.branching.size() == 5);
  CHECK_THROWS_AS(growth_dimension(regular_tree(2, 1, 1)), InsufficientDepthError);
  CHECK_THROWS_AS(growth_dimension(std::vector<std::size_t>{1, 3, 0}, 1), InsufficientDepthError);
  const GrowthEstimate v = growth_dimension(std::vector<std::size_t>{1, 3, 7, 20, 41}, 1);
  CHECK(v.ci_lo <= v.estimate);
  CHECK(v.estimate <= v.ci_hi);
}

}  // TEST_SUITE

TEST_SUITE("whitney_circle_growth") {

TEST_CASE("circle tree grows by a factor >= 2 per generation with h = 3") {
  auto K = circle_index(0.5, 5e-6, 400000);
  WhitneyOptions o;
  const double root_diam = std::pow(gosper::kAbsLambda, -5);
  o.roi = Disk{{0.5, 0.0}, 0.5 * blowup_factor(5) * root_diam + 2 * root_diam};
  const WhitneyDecomposition W = whitney_tiles(K, 0, 11, o);
  auto roots = W.at_level(5);
  std::sort(roots.begin(), roots.end(), [](const TileAddress& a, const TileAddress& b) {
    return distance(center(a), {0.5, 0}) < distance(center(b), {0.5, 0});
  });
  const WhitneyTree T = build_tree(W, roots.front(), 3, 2);
  const auto c = T.counts();
  INFO("counts " << c[0] << " " << c[1] << " " << c[2]);
  REQUIRE(c.size() == 3);
  CHECK(c[2] > 0);
  CHECK(c[1] >= 2 * c[0]);
  CHECK(c[2] >= 2 * c[1]);
}

}  // TEST_SUITE
