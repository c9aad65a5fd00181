#include "flab/gosper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>

#include "flab/error.hpp"
#include "flab/golden.hpp"

namespace flab {

namespace {

const Complex kOmega{0.5, gosper::kSqrt3 / 2.0};

// residue (a - 2b) mod 7  ->  index into kDigits
constexpr std::array<int, 7> kResidueToDigit{0, 1, 5, 6, 3, 2, 4};

std::int64_t floor_mod7(std::int64_t x) {
  const std::int64_t r = x % 7;
  return r < 0 ? r + 7 : r;
}

// lambda^k for k in [0, kMaxMembershipGeneration], computed by repeated multiplication.
const std::array<Complex, gosper::kMaxMembershipGeneration + 1>& lambda_powers() {
  static const auto table = [] {
    std::array<Complex, gosper::kMaxMembershipGeneration + 1> t{};
    t[0] = 1.0;
    for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] * gosper::kLambda;
    return t;
  }();
  return table;
}

Complex lambda_pow(int n) {
  const double arg = std::arg(gosper::kLambda);
  return std::polar(std::pow(gosper::kAbsLambda, n), n * arg);
}

Eisenstein reduce(Eisenstein e, int steps) {
  for (int k = 0; k < steps; ++k) e = split_digit(e).quotient;
  return e;
}

}  // namespace

DigitSplit split_digit(Eisenstein z) {
  const int d = kResidueToDigit[static_cast<std::size_t>(floor_mod7(z.a - 2 * z.b))];
  const Eisenstein t = z - kDigits[static_cast<std::size_t>(d)];
  // t / lambda = t * conj(lambda) / 7 with conj(lambda) = 3 - w.
  return {{(3 * t.a + t.b) / 7, (2 * t.b - t.a) / 7}, d};
}

Eisenstein hex_round(Complex v) {
  const double b = v.imag() * 2.0 / gosper::kSqrt3;
  const double a = v.real() - 0.5 * b;
  const double c = -a - b;
  double ra = std::round(a), rb = std::round(b), rc = std::round(c);
  const double da = std::abs(ra - a), db = std::abs(rb - b), dc = std::abs(rc - c);
  if (da > db && da > dc) {
    ra = -rb - rc;
  } else if (db > dc) {
    rb = -ra - rc;
  }
  return {static_cast<std::int64_t>(ra), static_cast<std::int64_t>(rb)};
}

Complex to_complex(Eisenstein z) {
  return static_cast<double>(z.a) + static_cast<double>(z.b) * kOmega;
}

namespace gosper {

double raw_diameter() { return golden::kRawDiameter; }
double level0_spacing() { return 1.0 / golden::kRawDiameter; }
Complex lambda_power(int k) { return lambda_pow(k); }
double raw_inradius() { return golden::kRawInradius; }

double raw_segment_length(int g) { return kRawHexSide * std::pow(kAbsLambda, -g); }

double raw_polygon_deviation(int g) {
  return kLimitDeviation * raw_segment_length(g) * (1.0 + 1e-3);
}

int generation_for(double tile_diameter, double tolerance) {
  const double rel = tolerance / tile_diameter * raw_diameter();
  for (int g = 0; g < kMaxMembershipGeneration; ++g) {
    if (raw_polygon_deviation(g) <= rel) return g;
  }
  return kMaxMembershipGeneration;
}

}  // namespace gosper

std::string to_string(const TileAddress& t) {
  std::ostringstream os;
  os << "(" << t.level << ";" << t.a << "," << t.b << ")";
  return os.str();
}

std::array<TileAddress, 7> children(const TileAddress& tile) {
  const Eisenstein base = mul_lambda(tile.coord());
  std::array<TileAddress, 7> out{};
  for (std::size_t i = 0; i < kDigits.size(); ++i) {
    out[i] = TileAddress::at(tile.level + 1, base + kDigits[i]);
  }
  return out;
}

TileAddress parent(const TileAddress& tile) {
  return TileAddress::at(tile.level - 1, split_digit(tile.coord()).quotient);
}

TileAddress ancestor(const TileAddress& tile, int level) {
  TileAddress t = tile;
  while (t.level > level) t = parent(t);
  return t;
}

std::array<TileAddress, 6> neighbors(const TileAddress& tile) {
  std::array<TileAddress, 6> out{};
  for (std::size_t i = 0; i < kUnits.size(); ++i) {
    out[i] = TileAddress::at(tile.level, tile.coord() + kUnits[i]);
  }
  return out;
}

bool is_neighbor(const TileAddress& x, const TileAddress& y) {
  if (x.level != y.level) return false;
  const Eisenstein d = y.coord() - x.coord();
  return std::find(kUnits.begin(), kUnits.end(), d) != kUnits.end();
}

bool is_within(const TileAddress& tile, const TileAddress& anc) {
  return tile.level >= anc.level && ancestor(tile, anc.level) == anc;
}

TileFrame TileFrame::of(const TileAddress& tile) {
  const Complex scale = gosper::level0_spacing() * lambda_pow(-tile.level);
  return {scale * to_complex(tile.coord()), scale};
}

TileFrame TileFrame::with_diameter(Point c, double diam) {
  return {to_complex(c), Complex(diam / gosper::raw_diameter(), 0.0)};
}

double TileFrame::diameter() const { return std::abs(scale) * gosper::raw_diameter(); }
double TileFrame::inradius() const { return std::abs(scale) * gosper::raw_inradius(); }

Point center(const TileAddress& tile) { return TileFrame::of(tile).center_point(); }

double diameter(const TileAddress& tile) { return std::pow(gosper::kAbsLambda, -tile.level); }

bool raw_tile_contains(Complex w, int generation) {
  const int g = std::clamp(generation, 0, gosper::kMaxMembershipGeneration);
  const double r = std::abs(w);
  const double dev = gosper::raw_polygon_deviation(g);
  if (r > 0.5 * gosper::raw_diameter() + dev + 1e-9) return false;
  if (r < gosper::raw_inradius() - dev - 1e-9) return true;
  const Eisenstein e = hex_round(w * lambda_powers()[static_cast<std::size_t>(g)]);
  return reduce(e, g).is_zero();
}

Region blow_up(const TileFrame& frame, double theta, int generation) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidArgument("blow_up: theta must be positive");
  const TileFrame f = frame.blown_up(theta);
  const int g = generation >= 0 ? generation : gosper::generation_for(f.diameter(), 1e-6 * f.diameter());
  return {f, g};
}

Region blow_up(const TileAddress& tile, double theta, int generation) {
  return blow_up(TileFrame::of(tile), theta, generation);
}

Region lambda_blow_up(const TileAddress& tile, int k, int generation) {
  const TileFrame f = TileFrame::of(tile).blown_up(lambda_pow(k));
  const int g = generation >= 0 ? generation : gosper::generation_for(f.diameter(), 1e-6 * f.diameter());
  return {f, g};
}

namespace {

// A blow-up as a set of level-L lattice tiles: {x : reduce(x - shift, depth) == 0}.
struct LatticeShape {
  Eisenstein shift;
  int depth = 0;
};

LatticeShape lift(const TileAddress& t, int k, int L) {
  if (k < 0) throw InvalidArgument("blow-up power must be >= 0");
  Eisenstein s = t.coord();
  for (int i = t.level; i < L; ++i) s = mul_lambda(s);
  return {s, k + (L - t.level)};
}

// Circumradius and inradius of the depth-d shape in level-L lattice units.
double shape_outer(int d) { return 0.5 * gosper::raw_diameter() * std::pow(gosper::kAbsLambda, d) + 1e-9; }
double shape_inner(int d) { return gosper::raw_inradius() * std::pow(gosper::kAbsLambda, d); }

Eisenstein lambda_times(Eisenstein e, int d) {
  for (int i = 0; i < d; ++i) e = mul_lambda(e);
  return e;
}

// T_da + v meets T_db (closed).
bool meet_rec(int da, int db, Eisenstein v) {
  const double mag = std::abs(to_complex(v));
  if (mag > shape_outer(da) + shape_outer(db)) return false;
  if (mag < shape_inner(da) + shape_inner(db)) return true;
  if (da == 0 && db == 0) {
    return v.is_zero() || std::find(kUnits.begin(), kUnits.end(), v) != kUnits.end();
  }
  if (da >= db) {
    for (const Eisenstein& d : kDigits)
      if (meet_rec(da - 1, db, v + lambda_times(d, da - 1))) return true;
  } else {
    for (const Eisenstein& d : kDigits)
      if (meet_rec(da, db - 1, v - lambda_times(d, db - 1))) return true;
  }
  return false;
}

// T_da + v is contained in T_db.
bool within_rec(int da, int db, Eisenstein v) {
  const double mag = std::abs(to_complex(v));
  if (mag > shape_outer(da) + shape_outer(db)) return false;
  if (mag + shape_outer(da) < shape_inner(db)) return true;
  if (da == 0) return reduce(v, db).is_zero();
  for (const Eisenstein& d : kDigits)
    if (!within_rec(da - 1, db, v + lambda_times(d, da - 1))) return false;
  return true;
}

}  // namespace

bool blowups_meet(const TileAddress& a, int k, const TileAddress& b, int j) {
  const int L = std::max(a.level, b.level);
  const LatticeShape sa = lift(a, k, L), sb = lift(b, j, L);
  return meet_rec(sa.depth, sb.depth, sa.shift - sb.shift);
}

bool blowup_within(const TileAddress& inner, int k, const TileAddress& outer, int j) {
  const int L = std::max(inner.level, outer.level);
  const LatticeShape si = lift(inner, k, L), so = lift(outer, j, L);
  return within_rec(si.depth, so.depth, si.shift - so.shift);
}

TileAddress locate(Point z, int level, int generation, double tolerance) {
  const int g = std::clamp(generation, 0, gosper::kMaxMembershipGeneration);
  // Raw lattice coordinates at this level; split off the nearest lattice point
  // first so the fine rounding works on a small remainder.
  const Complex w = to_complex(z) * lambda_pow(level) / gosper::level0_spacing();
  const Eisenstein c0 = hex_round(w);
  const Complex v = (w - to_complex(c0)) * lambda_powers()[static_cast<std::size_t>(g)];
  const Eisenstein e = hex_round(v);
  Eisenstein best = reduce(e, g) + c0;

  const double tol_v = tolerance * std::pow(gosper::kAbsLambda, level + g) / gosper::level0_spacing();
  const double self = std::norm(v - to_complex(e));
  for (const Eisenstein& u : kUnits) {
    const Eisenstein e2 = e + u;
    const double gap = 0.5 * (std::norm(v - to_complex(e2)) - self);
    if (gap > tol_v) continue;
    const Eisenstein cand = reduce(e2, g) + c0;
    if (std::tie(cand.a, cand.b) < std::tie(best.a, best.b)) best = cand;
  }
  return TileAddress::at(level, best);
}

std::vector<Complex> raw_boundary_polygon(int generation) {
  if (generation < 0) throw InvalidArgument("boundary polygon generation must be >= 0");
  if (generation > gosper::kMaxPolygonGeneration) {
    throw CapacityError("boundary polygon generation " + std::to_string(generation) +
                        " exceeds the configured maximum " +
                        std::to_string(gosper::kMaxPolygonGeneration));
  }
  std::vector<Complex> poly;
  poly.reserve(6);
  for (int k = 0; k < 6; ++k) {
    poly.push_back(std::polar(gosper::kRawHexSide, M_PI / 6.0 + k * M_PI / 3.0));
  }
  for (int g = 0; g < generation; ++g) {
    std::vector<Complex> next;
    next.reserve(poly.size() * 3);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Complex a = poly[i];
      const Complex b = poly[(i + 1) % poly.size()];
      const Complex w = (b - a) / gosper::kLambda;
      next.push_back(a);
      next.push_back(a + w);
      next.push_back(a + w + w * kOmega);
    }
    poly = std::move(next);
  }
  return poly;
}

BoundaryPolygon boundary_polygon(int generation) {
  const auto raw = raw_boundary_polygon(generation);
  const double s0 = gosper::level0_spacing();
  BoundaryPolygon out{generation, {}};
  out.vertices.reserve(raw.size());
  for (const Complex& w : raw) out.vertices.push_back(to_point(w * s0));
  return out;
}

std::vector<Point> tile_polygon(const TileFrame& frame, int generation) {
  const auto raw = raw_boundary_polygon(generation);
  std::vector<Point> out;
  out.reserve(raw.size());
  for (const Complex& w : raw) out.push_back(frame.from_raw(w));
  return out;
}

// ---------------------------------------------------------------------------
// BoundaryIndex: uniform grid of segment ids over a closed polyline.

namespace {

struct GridBuild {
  double x0, y0, cell;
  int nx, ny;
  std::vector<std::uint32_t> start;
  std::vector<std::uint32_t> segs;
};

GridBuild build_grid(const std::vector<Point>& v) {
  double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    xmin = std::min(xmin, v[i].x);
    xmax = std::max(xmax, v[i].x);
    ymin = std::min(ymin, v[i].y);
    ymax = std::max(ymax, v[i].y);
    total += distance(v[i], v[(i + 1) % v.size()]);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double seg = total / static_cast<double>(v.size());
  GridBuild g{};
  g.cell = std::max({2.0 * seg, span / 512.0, 1e-12});
  g.x0 = xmin - g.cell;
  g.y0 = ymin - g.cell;
  g.nx = static_cast<int>((xmax - g.x0) / g.cell) + 2;
  g.ny = static_cast<int>((ymax - g.y0) / g.cell) + 2;
  const std::size_t ncell = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
  std::vector<std::uint32_t> count(ncell + 1, 0);
  auto for_cells = [&](std::size_t i, auto&& fn) {
    const Point a = v[i], b = v[(i + 1) % v.size()];
    const int i0 = static_cast<int>((std::min(a.x, b.x) - g.x0) / g.cell);
    const int i1 = static_cast<int>((std::max(a.x, b.x) - g.x0) / g.cell);
    const int j0 = static_cast<int>((std::min(a.y, b.y) - g.y0) / g.cell);
    const int j1 = static_cast<int>((std::max(a.y, b.y) - g.y0) / g.cell);
    for (int j = j0; j <= j1; ++j)
      for (int ii = i0; ii <= i1; ++ii) fn(static_cast<std::size_t>(j) * g.nx + ii);
  };
  for (std::size_t i = 0; i < v.size(); ++i) for_cells(i, [&](std::size_t c) { ++count[c + 1]; });
  for (std::size_t c = 0; c < ncell; ++c) count[c + 1] += count[c];
  g.start = count;
  g.segs.resize(count[ncell]);
  std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for_cells(i, [&](std::size_t c) { g.segs[fill[c]++] = static_cast<std::uint32_t>(i); });
  }
  return g;
}

std::vector<Point> to_points(const std::vector<Complex>& raw) {
  std::vector<Point> out;
  out.reserve(raw.size());
  for (const Complex& w : raw) out.push_back(to_point(w));
  return out;
}

}  // namespace

BoundaryIndex::BoundaryIndex(int generation)
    : BoundaryIndex(to_points(raw_boundary_polygon(generation))) {
  generation_ = generation;
}

BoundaryIndex::BoundaryIndex(std::vector<Point> closed_polyline)
    : generation_(-1), verts_(std::move(closed_polyline)) {
  if (verts_.size() < 2) throw InvalidArgument("polyline needs at least two vertices");
  GridBuild g = build_grid(verts_);
  x0_ = g.x0;
  y0_ = g.y0;
  cell_ = g.cell;
  nx_ = g.nx;
  ny_ = g.ny;
  cell_start_ = std::move(g.start);
  cell_segments_ = std::move(g.segs);
}

double BoundaryIndex::distance(Complex wc) const {
  const Point p = to_point(wc);
  const std::size_t n = verts_.size();
  auto seg_dist = [&](std::uint32_t s) { return segment_distance(p, verts_[s], verts_[(s + 1) % n]); };

  const double fx = (p.x - x0_) / cell_;
  const double fy = (p.y - y0_) / cell_;
  if (fx < 0 || fy < 0 || fx >= nx_ || fy >= ny_) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < n; ++s) best = std::min(best, seg_dist(s));
    return best;
  }
  const int ci = static_cast<int>(fx);
  const int cj = static_cast<int>(fy);
  double best = std::numeric_limits<double>::infinity();
  const int rmax = std::max(nx_, ny_);
  for (int r = 0; r <= rmax; ++r) {
    for (int j = cj - r; j <= cj + r; ++j) {
      if (j < 0 || j >= ny_) continue;
      const bool edge_row = (j == cj - r || j == cj + r);
      for (int i = ci - r; i <= ci + r; i += (edge_row ? 1 : 2 * r)) {
        if (i >= 0 && i < nx_) {
          const std::size_t c = static_cast<std::size_t>(j) * nx_ + i;
          for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
            best = std::min(best, seg_dist(cell_segments_[k]));
          }
        }
        if (r == 0) break;
      }
    }
    if (best <= r * cell_) break;
  }
  return best;
}

const BoundaryIndex& boundary_index(int generation) {
  constexpr int kMax = 8;
  if (generation < 0 || generation > kMax) {
    throw CapacityError("boundary index available for generations 0.." + std::to_string(kMax));
  }
  static std::array<std::once_flag, kMax + 1> flags;
  static std::array<std::unique_ptr<BoundaryIndex>, kMax + 1> table;
  const auto g = static_cast<std::size_t>(generation);
  std::call_once(flags[g], [&] { table[g] = std::make_unique<BoundaryIndex>(generation); });
  return *table[g];
}

double depth(const TileFrame& frame, Point z, int generation) {
  const int g = std::clamp(generation, 0, 8);
  const Complex w = frame.to_raw(z);
  const double dist = boundary_index(g).distance(w);
  const double dev = gosper::raw_polygon_deviation(g);
  const double s = std::abs(frame.scale);
  if (!raw_tile_contains(w, g)) return -(dist + dev) * s;
  return (dist - dev) * s;
}

bool core_contains(const TileFrame& frame, double eta, Point z, int generation) {
  return depth(frame, z, generation) > eta * frame.diameter();
}

bool core_contains(const TileAddress& tile, double eta, Point z, int generation) {
  return core_contains(TileFrame::of(tile), eta, z, generation);
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b, int per_segment) {
  const BoundaryIndex ia(a);
  const BoundaryIndex ib(b);
  auto directed = [per_segment](const std::vector<Point>& from, const BoundaryIndex& to) {
    double worst = 0.0;
    const std::size_t n = from.size();
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const Point p = from[i], q = from[(i + 1) % n];
      for (int k = 0; k < per_segment; ++k) {
        const double t = static_cast<double>(k) / per_segment;
        worst = std::max(worst, to.distance(to_complex(p + (q - p) * t)));
      }
    }
    return worst;
  };
  return std::max(directed(a, ib), directed(b, ia));
}

double max_step_deviation(int generation) {
  const auto coarse = raw_boundary_polygon(generation);
  const auto fine = raw_boundary_polygon(generation + 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const Point a = to_point(coarse[k]);
    const Point b = to_point(coarse[(k + 1) % coarse.size()]);
    const double len = distance(a, b);
    for (std::size_t j = 1; j <= 2; ++j) {
      worst = std::max(worst, segment_distance(to_point(fine[3 * k + j]), a, b) / len);
    }
  }
  return worst;
}

double max_cumulative_deviation(int generation) {
  const auto hex = raw_boundary_polygon(0);
  const auto fine = raw_boundary_polygon(generation);
  const std::size_t per_edge = fine.size() / 6;
  double worst = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    const Point a = to_point(hex[k]);
    const Point b = to_point(hex[(k + 1) % 6]);
    for (std::size_t j = 0; j <= per_edge; ++j) {
      const Point p = to_point(fine[(k * per_edge + j) % fine.size()]);
      worst = std::max(worst, segment_distance(p, a, b) / gosper::kRawHexSide);
    }
  }
  return worst;
}

}  // namespace flab
