#include "flab/paths.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "flab/error.hpp"
#include "flab/rng.hpp"

namespace flab {

std::string to_string(PathKind k) {
  switch (k) {
    case PathKind::bm: return "bm";
    case PathKind::bridge: return "bridge";
    case PathKind::srw: return "srw";
  }
  return "bm";
}

PathKind path_kind_from_string(const std::string& s) {
  if (s == "bm") return PathKind::bm;
  if (s == "bridge") return PathKind::bridge;
  if (s == "srw") return PathKind::srw;
  throw InvalidArgument("unknown path kind '" + s + "'");
}

namespace {

// Increment k (1-based step) comes from Philox block k-1 of the increments key.
std::vector<Point> increments(std::size_t n, double dt, std::uint64_t seed, Exec exec) {
  const Philox4x32 gen(derive_seed(seed, stream::increments));
  const double sd = std::sqrt(dt);
  std::vector<Point> inc(n);
  const auto count = static_cast<std::int64_t>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
      const auto [a, b] = normal_pair(gen.block(static_cast<std::uint64_t>(k)));
      inc[static_cast<std::size_t>(k)] = {sd * a, sd * b};
    }
  } else {
    for (std::int64_t k = 0; k < count; ++k) {
      const auto [a, b] = normal_pair(gen.block(static_cast<std::uint64_t>(k)));
      inc[static_cast<std::size_t>(k)] = {sd * a, sd * b};
    }
  }
  return inc;
}

std::vector<Point> cumulative(const std::vector<Point>& inc) {
  std::vector<Point> pts(inc.size() + 1);
  pts[0] = {0.0, 0.0};
  for (std::size_t k = 0; k < inc.size(); ++k) pts[k + 1] = pts[k] + inc[k];
  return pts;
}

void to_bridge(std::vector<Point>& pts) {
  const std::size_t n = pts.size() - 1;
  const Point end = pts[n];
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n);
    pts[k] = pts[k] - end * t;
  }
  pts[n] = {0.0, 0.0};
}

}  // namespace

PathSample sample_bm(std::size_t n_steps, double dt, std::uint64_t seed, Exec exec) {
  if (n_steps < 1) throw InvalidArgument("sample_bm needs n_steps >= 1");
  if (!(dt > 0.0)) throw InvalidArgument("sample_bm needs dt > 0");
  PathSample p;
  p.kind = PathKind::bm;
  p.dt = dt;
  p.seed = seed;
  p.points = cumulative(increments(n_steps, dt, seed, exec));
  return p;
}

double kill_time_for(std::uint64_t seed) {
  const Philox4x32 gen(derive_seed(seed, stream::kill_time));
  const auto w = gen.block(0);
  return -std::log(uniform_open(w[0], w[1]));
}

PathSample sample_killed(std::size_t n_steps_max, double dt, std::uint64_t seed, Exec exec) {
  if (!(dt > 0.0)) throw InvalidArgument("sample_killed needs dt > 0");
  const double tau = kill_time_for(seed);
  const double budget = dt * static_cast<double>(n_steps_max);
  std::size_t m = n_steps_max;
  bool truncated = false;
  if (tau > budget) {
    truncated = true;
  } else {
    m = static_cast<std::size_t>(std::floor(tau / dt));
    if (m > n_steps_max) m = n_steps_max;
  }
  PathSample p;
  p.kind = PathKind::bm;
  p.dt = dt;
  p.seed = seed;
  p.points = m == 0 ? std::vector<Point>{{0.0, 0.0}} : cumulative(increments(m, dt, seed, exec));
  p.kill_time = tau;
  p.truncated = truncated;
  return p;
}

PathSample sample_bridge(std::size_t n_steps, std::uint64_t seed, Exec exec) {
  if (n_steps < 2) throw InvalidArgument("sample_bridge needs n_steps >= 2");
  PathSample p = sample_bm(n_steps, 1.0 / static_cast<double>(n_steps), seed, exec);
  p.kind = PathKind::bridge;
  to_bridge(p.points);
  return p;
}

PathSample sample_bridge_reversed(std::size_t n_steps, std::uint64_t seed, Exec exec) {
  if (n_steps < 2) throw InvalidArgument("sample_bridge needs n_steps >= 2");
  auto inc = increments(n_steps, 1.0 / static_cast<double>(n_steps), seed, exec);
  std::vector<Point> rev(inc.rbegin(), inc.rend());
  for (Point& d : rev) d = d * -1.0;
  PathSample p;
  p.kind = PathKind::bridge;
  p.dt = 1.0 / static_cast<double>(n_steps);
  p.seed = seed;
  p.points = cumulative(rev);
  to_bridge(p.points);
  return p;
}

std::vector<LatticePoint> srw_lattice_points(std::size_t n_steps, std::uint64_t seed) {
  if (n_steps < 1) throw InvalidArgument("sample_srw needs n_steps >= 1");
  const Philox4x32 gen(derive_seed(seed, stream::lattice));
  static constexpr std::int64_t dx[4] = {1, 0, -1, 0};
  static constexpr std::int64_t dy[4] = {0, 1, 0, -1};
  std::vector<LatticePoint> out(n_steps + 1);
  LatticePoint cur{0, 0};
  out[0] = cur;
  // 64 steps per Philox block, two bits each.
  Philox4x32::Counter words{};
  for (std::size_t k = 0; k < n_steps; ++k) {
    const std::size_t within = k % 64;
    if (within == 0) words = gen.block(k / 64);
    const std::uint32_t word = words[within / 16];
    const unsigned dir = (word >> (2 * (within % 16))) & 3u;
    cur.x += dx[dir];
    cur.y += dy[dir];
    out[k + 1] = cur;
  }
  return out;
}

PathSample sample_srw(std::size_t n_steps, std::uint64_t seed) {
  const auto lat = srw_lattice_points(n_steps, seed);
  PathSample p;
  p.kind = PathKind::srw;
  p.dt = 1.0;
  p.seed = seed;
  p.points.reserve(lat.size());
  for (const LatticePoint& q : lat) p.points.push_back({static_cast<double>(q.x), static_cast<double>(q.y)});
  return p;
}

PathSample prefix(const PathSample& p, std::size_t m) {
  if (m + 1 > p.points.size()) throw InvalidArgument("prefix longer than path");
  PathSample out = p;
  out.points.resize(m + 1);
  return out;
}

void write_path_csv(std::ostream& os, const PathSample& p) {
  char buf[96];
  os << "t,x,y\n";
  for (std::size_t k = 0; k < p.points.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.time_of(k), p.points[k].x, p.points[k].y);
    os << buf;
  }
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary path format assumes little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw Error("truncated path file");
  return v;
}

constexpr char kMagic[8] = {'F', 'L', 'A', 'B', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void write_path_binary(std::ostream& os, const PathSample& p) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kFormatVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(p.kind));
  put<std::uint64_t>(os, p.points.size());
  put<double>(os, p.dt);
  put<std::uint64_t>(os, p.seed);
  put<std::uint8_t>(os, p.kill_time ? 1 : 0);
  put<double>(os, p.kill_time.value_or(0.0));
  for (const Point& q : p.points) {
    put<double>(os, q.x);
    put<double>(os, q.y);
  }
}

PathSample read_path_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error("not a path file");
  if (get<std::uint32_t>(is) != kFormatVersion) throw Error("unsupported path file version");
  PathSample p;
  const auto kind = get<std::uint32_t>(is);
  if (kind > 2) throw Error("bad path kind");
  p.kind = static_cast<PathKind>(kind);
  const auto n = get<std::uint64_t>(is);
  p.dt = get<double>(is);
  p.seed = get<std::uint64_t>(is);
  const bool has_kill = get<std::uint8_t>(is) != 0;
  const double kill = get<double>(is);
  if (has_kill) p.kill_time = kill;
  p.points.resize(n);
  for (auto& q : p.points) {
    q.x = get<double>(is);
    q.y = get<double>(is);
  }
  return p;
}

}  // namespace flab
