#include "flab/branching.hpp"

#include <cmath>
#include <random>

#include "flab/error.hpp"
#include "flab/rng.hpp"

namespace flab {

namespace {

void validate(const BranchingSpec& s) {
  if (s.m < 0 || s.M <= s.m) throw InvalidArgument("branching spec needs 0 <= m < M");
  if (!(s.b > s.m && s.b <= s.M)) throw InvalidArgument("branching spec needs m < b <= M");
}

std::uint64_t binomial(PhiloxStream& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::uint64_t> dist(n, p);
  return dist(rng);
}

}  // namespace

double psi(const BranchingSpec& spec, double s) {
  const double sm = std::pow(s, spec.m);
  const double sM = std::pow(s, spec.M);
  return sm + (spec.b - spec.m) / static_cast<double>(spec.M - spec.m) * (sM - sm);
}

double extinction_prob(const BranchingSpec& spec) {
  validate(spec);
  if (spec.m >= 1) return 0.0;
  if (spec.b == spec.M) return 0.0;  // psi(s) = s^M
  // psi(s) - s is positive at 0 and, when b > 1, negative just below 1.
  double lo = 0.0, hi = 1.0 - 1e-9;
  if (psi(spec, hi) - hi >= 0.0) return 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (psi(spec, mid) - mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double binomial_extinction_by(int D, double p, int depth) {
  double s = 0.0;
  for (int k = 0; k < depth; ++k) s = std::pow(1.0 - p + p * s, D);
  return s;
}

BranchingSim simulate_branching(const BranchingSpec& spec, std::size_t runs, std::uint64_t seed,
                                int generations, std::uint64_t cap, Exec exec,
                                std::vector<std::uint8_t>* extinct_per_run) {
  validate(spec);
  const double pi = (spec.b - spec.m) / static_cast<double>(spec.M - spec.m);
  const std::uint64_t key = derive_seed(seed, stream::branching);
  std::size_t extinct = 0;
  const auto n = static_cast<std::int64_t>(runs);
  if (extinct_per_run) extinct_per_run->assign(runs, 0);
  auto one = [&](std::int64_t r) -> bool {
    PhiloxStream rng(derive_seed(key, static_cast<std::uint64_t>(r)));
    std::uint64_t z = 1;
    for (int g = 0; g < generations && z > 0 && z < cap; ++g) {
      const std::uint64_t big = binomial(rng, z, pi);
      z = static_cast<std::uint64_t>(spec.m) * (z - big) + static_cast<std::uint64_t>(spec.M) * big;
    }
    if (extinct_per_run) (*extinct_per_run)[static_cast<std::size_t>(r)] = z == 0;
    return z == 0;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for reduction(+ : extinct) schedule(static)
    for (std::int64_t r = 0; r < n; ++r) extinct += one(r) ? 1 : 0;
  } else {
    for (std::int64_t r = 0; r < n; ++r) extinct += one(r) ? 1 : 0;
  }
  return {runs, extinct};
}

PercolationResult percolate_tree(const WhitneyTree& T, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("percolation needs 0 < p < 1");
  PercolationResult out;
  if (T.generations.empty()) return out;
  PhiloxStream rng(derive_seed(seed, stream::branching));
  std::vector<std::uint8_t> alive{1};
  out.component_size = 1;
  for (std::size_t g = 1; g < T.generations.size(); ++g) {
    const auto& gen = T.generations[g];
    std::vector<std::uint8_t> next(gen.size(), 0);
    bool any = false;
    // One uniform per edge in generation order, whether or not its parent is connected.
    for (std::size_t i = 0; i < gen.size(); ++i) {
      const bool keep = rng.uniform() < p;
      if (keep && alive[static_cast<std::size_t>(gen[i].parent)]) {
        next[i] = 1;
        any = true;
        ++out.component_size;
      }
    }
    if (!any) break;
    out.depth_reached = static_cast<int>(g);
    alive = std::move(next);
  }
  out.survived = out.depth_reached + 1 == static_cast<int>(T.generations.size()) &&
                 T.generations.back().size() > 0;
  return out;
}

PercolationResult percolate_regular(int D, int depth, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("percolation needs 0 < p < 1");
  if (D < 1 || depth < 0) throw InvalidArgument("regular percolation needs D >= 1, depth >= 0");
  PhiloxStream rng(derive_seed(seed, stream::branching));
  PercolationResult out;
  std::uint64_t z = 1;
  out.component_size = 1;
  for (int g = 1; g <= depth; ++g) {
    z = binomial(rng, z * static_cast<std::uint64_t>(D), p);
    if (z == 0) break;
    out.depth_reached = g;
    out.component_size = out.component_size + z < out.component_size ? UINT64_MAX : out.component_size + z;
    // Past this size extinction within the remaining depth is negligible but
    // still simulated exactly; clamp only to keep the counts finite.
    if (z > (std::uint64_t{1} << 40)) z = std::uint64_t{1} << 40;
  }
  out.survived = out.depth_reached == depth;
  return out;
}

SurvivalEstimate percolation_survival(int D, int depth, double p, std::size_t trials, std::uint64_t seed,
                                      Exec exec) {
  std::size_t survived = 0;
  const auto n = static_cast<std::int64_t>(trials);
  if (exec == Exec::parallel) {
#pragma omp parallel for reduction(+ : survived) schedule(static)
    for (std::int64_t k = 0; k < n; ++k)
      survived += percolate_regular(D, depth, p, derive_seed(seed, static_cast<std::uint64_t>(k))).survived;
  } else {
    for (std::int64_t k = 0; k < n; ++k)
      survived += percolate_regular(D, depth, p, derive_seed(seed, static_cast<std::uint64_t>(k))).survived;
  }
  return {trials, survived};
}

}  // namespace flab
