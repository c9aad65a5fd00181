#pragma once

// Seeded samplers for planar Brownian motion, Brownian bridge and simple
// random walk. Every sample is a pure function of (seed, index), so results
// do not depend on the thread count and prefixes agree across lengths.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flab/exec.hpp"
#include "flab/point.hpp"
#include "flab/raster.hpp"

namespace flab {

enum class PathKind : std::uint32_t { bm = 0, bridge = 1, srw = 2 };

std::string to_string(PathKind k);
PathKind path_kind_from_string(const std::string& s);

struct PathSample {
  PathKind kind = PathKind::bm;
  std::vector<Point> points;
  double dt = 1.0;
  std::uint64_t seed = 0;
  std::optional<double> kill_time;
  bool truncated = false;  // kill time fell beyond the step budget

  std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
  double time_of(std::size_t k) const { return dt * static_cast<double>(k); }
};

/// points[0] = origin; i.i.d. N(0, dt I) increments from the increments sub-stream.
PathSample sample_bm(std::size_t n_steps, double dt, std::uint64_t seed, Exec exec = Exec::parallel);

/// Brownian path with an independent Exp(1) kill time; keeps the samples at
/// times <= kill_time. truncated is set when kill_time > n_steps_max * dt.
PathSample sample_killed(std::size_t n_steps_max, double dt, std::uint64_t seed,
                         Exec exec = Exec::parallel);

/// Exp(1) kill time for `seed` (the value sample_killed uses).
double kill_time_for(std::uint64_t seed);

/// B(t) - t B(1) on [0, 1] with dt = 1/n_steps.
PathSample sample_bridge(std::size_t n_steps, std::uint64_t seed, Exec exec = Exec::parallel);

/// Bridge built from the time reversal B(1 - t) - B(1) of the same Brownian path.
PathSample sample_bridge_reversed(std::size_t n_steps, std::uint64_t seed, Exec exec = Exec::parallel);

/// Nearest-neighbour walk on Z^2 from the origin.
PathSample sample_srw(std::size_t n_steps, std::uint64_t seed);
std::vector<LatticePoint> srw_lattice_points(std::size_t n_steps, std::uint64_t seed);

/// First m+1 points (m steps) of a path.
PathSample prefix(const PathSample& p, std::size_t m);

/// Default time step so that the step standard deviation matches a raster cell
/// for a region of the given diameter: diam^2 / 1e6.
inline double default_dt(double diam_of_interest) { return diam_of_interest * diam_of_interest * 1e-6; }

void write_path_csv(std::ostream& os, const PathSample& p);
/// Binary frame: "FLABPATH" magic, u32 version, u32 kind, u64 n points,
/// f64 dt, u64 seed, u8 has_kill, f64 kill_time, then n (x, y) f64 pairs.
/// All little-endian.
void write_path_binary(std::ostream& os, const PathSample& p);
PathSample read_path_binary(std::istream& is);

}  // namespace flab
