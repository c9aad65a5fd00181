#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flab/paths.hpp"
#include "flab/rng.hpp"

using namespace flab;

namespace {
double max_norm(const PathSample& p) {
  double m = 0;
  for (const Point& z : p.points) m = std::max(m, length(z));
  return m;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}
}  // namespace

TEST_SUITE("stochastic_paths") {

TEST_CASE("Brownian motion starts at the origin") {
  const PathSample p = sample_bm(1000, 1e-3, 5);
  CHECK(p.points.size() == 1001);
  CHECK(p.points[0] == Point{0, 0});
  CHECK(p.kind == PathKind::bm);
}

TEST_CASE("E|B(1)|^2 = 2") {
  double sum = 0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) sum += norm2(sample_bm(100, 0.01, static_cast<std::uint64_t>(s)).points.back());
  CHECK(sum / seeds == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("Brownian scaling") {
  // s B(t / s^2) against B(t), t = 1, s = 2, over common seeds.
  const int seeds = 10000;
  double v1 = 0, v2 = 0;
  for (int s = 0; s < seeds; ++s) {
    const Point a = sample_bm(50, 1.0 / 50, static_cast<std::uint64_t>(s) + 100000).points.back();
    const Point b = sample_bm(50, 0.25 / 50, static_cast<std::uint64_t>(s) + 100000).points.back() * 2.0;
    v1 += norm2(a);
    v2 += norm2(b);
  }
  CHECK(v2 == doctest::Approx(v1).epsilon(0.02));
}

TEST_CASE("increments have per-coordinate variance dt") {
  const PathSample p = sample_bm(200000, 3e-4, 9);
  double sx = 0, sy = 0, mx = 0;
  for (std::size_t k = 1; k < p.points.size(); ++k) {
    const Point d = p.points[k] - p.points[k - 1];
    sx += d.x * d.x;
    sy += d.y * d.y;
    mx += d.x;
  }
  const double n = static_cast<double>(p.steps());
  CHECK(sx / n == doctest::Approx(3e-4).epsilon(0.02));
  CHECK(sy / n == doctest::Approx(3e-4).epsilon(0.02));
  CHECK(std::abs(mx / n) < 5 * std::sqrt(3e-4 / n));
}

TEST_CASE("killed Brownian motion") {
  const int seeds = 10000;
  double sum = 0;
  int below = 0;
  std::vector<double> tau, x;
  for (int s = 0; s < seeds; ++s) {
    const PathSample p = sample_killed(100, 1e-3, static_cast<std::uint64_t>(s));
    REQUIRE(p.kill_time.has_value());
    const double t = *p.kill_time;
    CHECK(t == kill_time_for(static_cast<std::uint64_t>(s)));
    sum += t;
    below += t < 1.0;
    if (p.points.size() > 1) {
      tau.push_back(t);
      x.push_back(p.points[1].x);
    }
  }
  CHECK(sum / seeds == doctest::Approx(1.0).epsilon(0.03));
  CHECK(static_cast<double>(below) / seeds == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.02 / (1.0 - std::exp(-1.0))));
  double mt = 0, mx = 0;
  for (std::size_t k = 0; k < tau.size(); ++k) { mt += tau[k]; mx += x[k]; }
  mt /= tau.size();
  mx /= x.size();
  double cov = 0, vt = 0, vx = 0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    cov += (tau[k] - mt) * (x[k] - mx);
    vt += (tau[k] - mt) * (tau[k] - mt);
    vx += (x[k] - mx) * (x[k] - mx);
  }
  CHECK(std::abs(cov / std::sqrt(vt * vx)) < 0.03);
}

TEST_CASE("killed path stops at the last step before the kill time") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const PathSample p = sample_killed(5000, 1e-3, s);
    const double t = *p.kill_time;
    if (p.truncated) {
      CHECK(p.steps() == 5000);
      CHECK(t > 5.0);
    } else {
      CHECK(p.time_of(p.steps()) <= t);
      CHECK(p.time_of(p.steps() + 1) > t);
    }
  }
}

TEST_CASE("Brownian bridge") {
  const PathSample b = sample_bridge(1000, 4);
  CHECK(b.points.front() == Point{0, 0});
  CHECK(length(b.points.back()) < 1e-12);
  CHECK(b.kind == PathKind::bridge);

  const int seeds = 10000;
  double vx = 0, vy = 0;
  std::vector<double> m1, m2;
  for (int s = 0; s < seeds; ++s) {
    const PathSample p = sample_bridge(100, static_cast<std::uint64_t>(s));
    vx += p.points[50].x * p.points[50].x;
    vy += p.points[50].y * p.points[50].y;
    m1.push_back(max_norm(p));
    m2.push_back(max_norm(sample_bridge_reversed(100, static_cast<std::uint64_t>(s) + 1'000'000)));
  }
  CHECK(std::abs(vx / seeds - 0.25) < 0.02);
  CHECK(std::abs(vy / seeds - 0.25) < 0.02);
  CHECK(ks_distance(m1, m2) < 0.03);
}

TEST_CASE("simple random walk") {
  const PathSample p = sample_srw(5000, 1);
  CHECK(p.points[0] == Point{0, 0});
  for (std::size_t k = 1; k < p.points.size(); ++k) {
    const Point d = p.points[k] - p.points[k - 1];
    CHECK(std::abs(d.x) + std::abs(d.y) == 1.0);
    CHECK(p.points[k].x == std::round(p.points[k].x));
  }
  double sum = 0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    const PathSample w = sample_srw(1000, static_cast<std::uint64_t>(s));
    const Point e = w.points.back();
    sum += norm2(e);
    const auto parity = static_cast<long>(std::abs(e.x) + std::abs(e.y)) % 2;
    CHECK(parity == 0);  // n = 1000 is even
  }
  CHECK(sum / seeds == doctest::Approx(1000.0).epsilon(0.03));
  const PathSample odd = sample_srw(7, 3);
  CHECK(static_cast<long>(std::abs(odd.points.back().x) + std::abs(odd.points.back().y)) % 2 == 1);
}

TEST_CASE("reproducible across runs, execution modes and thread counts") {
  const PathSample a = sample_bm(100000, 1e-5, 123, Exec::serial);
  const PathSample b = sample_bm(100000, 1e-5, 123, Exec::parallel);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(3);
  const PathSample c = sample_bm(100000, 1e-5, 123, Exec::parallel);
  omp_set_num_threads(saved);
  CHECK(a.points == b.points);
  CHECK(a.points == c.points);
  CHECK(sample_bridge(5000, 8, Exec::serial).points == sample_bridge(5000, 8, Exec::parallel).points);
  CHECK(sample_srw(1000, 5).points == sample_srw(1000, 5).points);
  CHECK(sample_bm(100, 1e-3, 1).points != sample_bm(100, 1e-3, 2).points);
}

TEST_CASE("prefix property") {
  const PathSample full = sample_bm(10000, 1e-4, 31);
  for (std::size_t m : {1u, 17u, 4096u, 9999u}) {
    CHECK(sample_bm(m, 1e-4, 31).points == prefix(full, m).points);
  }
}

TEST_CASE("kill times and increments use separate streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  const PathSample k = sample_killed(1000, 1e-3, 55);
  const PathSample b = sample_bm(1000, 1e-3, 55);
  const std::size_t n = k.points.size();
  CHECK(std::equal(k.points.begin(), k.points.end(), b.points.begin(), b.points.begin() + static_cast<std::ptrdiff_t>(n)));
}

TEST_CASE("path serialization round trip") {
  const PathSample p = sample_killed(3000, 1e-3, 12);
  std::stringstream bin;
  write_path_binary(bin, p);
  const PathSample q = read_path_binary(bin);
  CHECK(q.points == p.points);
  CHECK(q.dt == p.dt);
  CHECK(q.seed == p.seed);
  CHECK(q.kill_time == p.kill_time);
  std::ostringstream csv;
  write_path_csv(csv, p);
  CHECK(csv.str().find('\n') != std::string::npos);
}

}  // TEST_SUITE
