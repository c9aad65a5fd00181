#include "flab/tst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "flab/error.hpp"
#include "flab/whitney.hpp"

namespace flab {

std::vector<Point> convex_hull(std::span<const Point> points) {
  std::vector<Point> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

double min_width(std::span<const Point> points) {
  const auto h = convex_hull(points);
  const std::size_t n = h.size();
  if (n < 3) return 0.0;
  double best = INFINITY;
  std::size_t j = 1;
  auto height = [&](std::size_t e, std::size_t v) {
    const Point a = h[e], b = h[(e + 1) % n];
    return std::abs(cross(b - a, h[v] - a)) / distance(a, b);
  };
  double mag = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    while (height(e, (j + 1) % n) >= height(e, j) && (j + 1) % n != e) j = (j + 1) % n;
    best = std::min(best, height(e, j));
    mag = std::max({mag, std::abs(h[e].x), std::abs(h[e].y)});
  }
  // Widths at the rounding level of the coordinates are collinear input.
  return best <= 64.0 * std::numeric_limits<double>::epsilon() * mag ? 0.0 : best;
}

double set_diameter(std::span<const Point> points) {
  const auto h = convex_hull(points);
  double best = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j) best = std::max(best, distance(h[i], h[j]));
  return best;
}

double beta(std::span<const Point> points, double diam_S) {
  if (!(diam_S > 0.0)) throw InvalidArgument("beta needs a region of positive diameter");
  if (points.size() <= 2) return 0.0;
  return 0.5 * min_width(points) / diam_S;
}

double DyadicSquare::side() const { return std::ldexp(1.0, -level); }
double DyadicSquare::diam() const { return std::sqrt(2.0) * side(); }

namespace {

struct Bucketed {
  std::vector<Cell> keys;              // sorted distinct cells
  std::vector<std::size_t> start;      // ranges into pts
  std::vector<Point> pts;              // points grouped by cell
};

Bucketed bucket(const std::vector<Point>& scaled, double n) {
  std::vector<std::pair<Cell, std::size_t>> tagged;
  tagged.reserve(scaled.size());
  for (std::size_t k = 0; k < scaled.size(); ++k) {
    tagged.push_back({{static_cast<std::int64_t>(std::floor(scaled[k].x * n)),
                       static_cast<std::int64_t>(std::floor(scaled[k].y * n))}, k});
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  });
  Bucketed B;
  for (std::size_t k = 0; k < tagged.size(); ++k) {
    if (B.keys.empty() || !(B.keys.back() == tagged[k].first)) {
      B.keys.push_back(tagged[k].first);
      B.start.push_back(k);
    }
    B.pts.push_back(scaled[tagged[k].second]);
  }
  B.start.push_back(tagged.size());
  return B;
}

}  // namespace

BetaAtlas tst_sum(std::span<const Point> E, int j_max, const TstOptions& opts) {
  if (E.empty()) throw InvalidArgument("tst_sum needs a nonempty set");
  if (j_max < 0) throw InvalidArgument("tst_sum needs j_max >= 0");
  double x0 = E[0].x, y0 = E[0].y, x1 = x0, y1 = y0;
  for (const Point& p : E) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double span = std::max(x1 - x0, y1 - y0);
  const double s = span > 0.0 ? 1.0 / span : 1.0;
  std::vector<Point> scaled;
  scaled.reserve(E.size());
  for (const Point& p : E) scaled.push_back({(p.x - x0) * s, (p.y - y0) * s});

  BetaAtlas atlas;
  atlas.j_max = j_max;
  atlas.diam_E = set_diameter(E);
  atlas.sum = atlas.diam_E;

  for (int j = 0; j <= j_max; ++j) {
    const double n = std::ldexp(1.0, j);
    const Bucketed B = bucket(scaled, n);
    std::vector<Cell> squares;
    squares.reserve(B.keys.size() * 9);
    for (const Cell& c : B.keys)
      for (int dk = -1; dk <= 1; ++dk)
        for (int di = -1; di <= 1; ++di) squares.push_back({c.i + di, c.j + dk});
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
    if (atlas.entries.size() + squares.size() > opts.max_squares) {
      throw CapacityError("tst_sum square count exceeds " + std::to_string(opts.max_squares));
    }
    const double diam3 = 3.0 * std::sqrt(2.0) / n;
    const double diamQ = std::sqrt(2.0) / n / s;
    std::vector<BetaEntry> level(squares.size());
    auto work = [&](std::int64_t q) {
      const Cell Q = squares[static_cast<std::size_t>(q)];
      std::vector<Point> pts;
      for (int dk = -1; dk <= 1; ++dk)
        for (int di = -1; di <= 1; ++di) {
          const Cell c{Q.i + di, Q.j + dk};
          const auto it = std::lower_bound(B.keys.begin(), B.keys.end(), c);
          if (it == B.keys.end() || !(*it == c)) continue;
          const auto idx = static_cast<std::size_t>(it - B.keys.begin());
          pts.insert(pts.end(), B.pts.begin() + static_cast<std::ptrdiff_t>(B.start[idx]),
                     B.pts.begin() + static_cast<std::ptrdiff_t>(B.start[idx + 1]));
        }
      level[static_cast<std::size_t>(q)] = {{j, Q.i, Q.j}, beta(pts, diam3), diamQ};
    };
    const auto nsq = static_cast<std::int64_t>(squares.size());
    if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::int64_t q = 0; q < nsq; ++q) work(q);
    } else {
      for (std::int64_t q = 0; q < nsq; ++q) work(q);
    }
    // squares are sorted by (k, i); the atlas orders by (level, i, k)
    std::sort(level.begin(), level.end(), [](const BetaEntry& a, const BetaEntry& b) { return a.square < b.square; });
    for (const BetaEntry& e : level) {
      atlas.sum += e.beta * e.beta * e.diam;
      atlas.entries.push_back(e);
    }
  }
  return atlas;
}

namespace {

std::vector<Point> points_in(std::span<const Point> E, const Region& r) {
  std::vector<Point> out;
  const Point c = r.center();
  const double rc = r.circumradius(), ri = r.inradius();
  for (const Point& p : E) {
    const double d = distance(p, c);
    if (d > rc) continue;
    if (d < ri || r.contains(p)) out.push_back(p);
  }
  return out;
}

constexpr int kCoverGeneration = 5;

}  // namespace

double tile_beta(std::span<const Point> E, const TileAddress& G) {
  const Region r = lambda_blow_up(G, 5, kCoverGeneration);
  const auto pts = points_in(E, r);
  return beta(pts, r.frame.diameter());
}

std::vector<TileAddress> blowup_cover(std::span<const Point> E, int n_lo, int n_hi) {
  std::vector<TileAddress> out;
  if (E.empty()) return out;
  // Candidates: lattice points within the blow-up circumradius (raw lattice
  // units) of a tile holding a point of E.
  const double rho = 0.5 * blowup_factor(5) * gosper::raw_diameter() + 1.0;
  const auto R = static_cast<std::int64_t>(std::ceil(rho * 2.0 / gosper::kSqrt3)) + 1;
  std::vector<Eisenstein> disk;
  for (std::int64_t b = -R; b <= R; ++b)
    for (std::int64_t a = -2 * R; a <= 2 * R; ++a)
      if (std::abs(to_complex(Eisenstein{a, b})) <= rho) disk.push_back({a, b});

  for (int n = n_lo; n <= n_hi; ++n) {
    std::vector<Eisenstein> located;
    for (const Point& p : E) located.push_back(locate(p, n, 12).coord());
    std::sort(located.begin(), located.end(), [](Eisenstein x, Eisenstein y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    located.erase(std::unique(located.begin(), located.end()), located.end());
    std::int64_t amin = INT64_MAX, amax = INT64_MIN, bmin = INT64_MAX, bmax = INT64_MIN;
    for (const Eisenstein& e : located) {
      amin = std::min(amin, e.a);
      amax = std::max(amax, e.a);
      bmin = std::min(bmin, e.b);
      bmax = std::max(bmax, e.b);
    }
    const std::int64_t pad = 3 * R;
    const std::int64_t W = amax - amin + 2 * pad + 1, H = bmax - bmin + 2 * pad + 1;
    if (static_cast<double>(W) * static_cast<double>(H) > 2e8) throw CapacityError("blowup_cover too large");
    std::vector<std::uint8_t> mark(static_cast<std::size_t>(W * H), 0);
    for (const Eisenstein& e : located)
      for (const Eisenstein& d : disk)
        mark[static_cast<std::size_t>((e.b + d.b - bmin + pad) * W + (e.a + d.a - amin + pad))] = 1;
    std::vector<TileAddress> cands;
    for (std::int64_t y = 0; y < H; ++y)
      for (std::int64_t x = 0; x < W; ++x)
        if (mark[static_cast<std::size_t>(y * W + x)]) cands.push_back({n, x + amin - pad, y + bmin - pad});
    std::vector<std::uint8_t> keep(cands.size(), 0);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(cands.size()); ++k) {
      const Region r = lambda_blow_up(cands[static_cast<std::size_t>(k)], 5, kCoverGeneration);
      const Point c = r.center();
      for (const Point& p : E) {
        const double d = distance(p, c);
        if (d > r.circumradius()) continue;
        if (d < r.inradius() || r.contains(p)) {
          keep[static_cast<std::size_t>(k)] = 1;
          break;
        }
      }
    }
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (keep[k]) out.push_back(cands[k]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TileLevels tile_floor_levels(double diam_E, double r) {
  return {static_cast<int>(std::floor(5.0 - std::log(4.0 * diam_E) / gosper::kLogAbsLambda)),
          static_cast<int>(std::floor(-std::log(r) / gosper::kLogAbsLambda + 1e-12))};
}

double curve_length_floor(std::span<const Point> E, double r, FloorVariant variant) {
  if (!(r > 0.0)) throw InvalidArgument("curve_length_floor needs r > 0");
  if (E.empty()) throw InvalidArgument("curve_length_floor needs a nonempty set");
  if (variant == FloorVariant::squares) {
    double x0 = E[0].x, y0 = E[0].y, x1 = x0, y1 = y0;
    for (const Point& p : E) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    const double span = std::max(x1 - x0, y1 - y0);
    if (span == 0.0) return 0.0;
    // diam(Q) at level j in input units is sqrt(2) 2^-j span.
    const int j_max = static_cast<int>(std::floor(std::log2(std::sqrt(2.0) * span / r) + 1e-12));
    if (j_max < 0) return set_diameter(E);
    return tst_sum(E, j_max).sum;
  }
  const double dE = set_diameter(E);
  if (dE == 0.0) return 0.0;
  const auto [n_lo, n_hi] = tile_floor_levels(dE, r);
  double sum = dE;
  if (n_hi < n_lo) return sum;
  for (const TileAddress& G : blowup_cover(E, n_lo, n_hi)) {
    const double b = tile_beta(E, G);
    sum += b * b * diameter(G);
  }
  return sum;
}

std::vector<Point> sample_tiles(std::span<const TileAddress> U) {
  static const auto raw1 = raw_boundary_polygon(1);
  std::vector<Point> out;
  for (const TileAddress& t : U) {
    const TileFrame f = TileFrame::of(t);
    out.push_back(f.center_point());
    for (const Complex& w : raw1) out.push_back(f.from_raw(w));
  }
  return out;
}

double wiggliness_score(double gamma_len, std::span<const TileAddress> U, std::span<const TileAddress> xi, int n) {
  if (U.empty()) throw InvalidArgument("wiggliness_score needs a nonempty tile set");
  const auto pts = sample_tiles(U);
  double sum = 0.0;
  for (const TileAddress& G : xi) {
    const double b = tile_beta(pts, G);
    sum += b * b * diameter(G);
  }
  return std::pow(gosper::kAbsLambda, n) * (-gamma_len + sum);
}

}  // namespace flab
