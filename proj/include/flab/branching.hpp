#pragma once

// Extinction of dominated branching processes and edge percolation on trees.

#include <cstdint>
#include <vector>

#include "flab/exec.hpp"
#include "flab/whitney.hpp"

namespace flab {

struct BranchingSpec {
  int m = 0;        // min offspring
  int M = 2;        // max offspring
  double b = 1.5;   // mean offspring bound, m < b <= M
  double p = 0.5;   // percolation retention probability
  double theta = 2.0;  // metric base > 1
};

/// psi(s) = s^m + (b - m)/(M - m) (s^M - s^m).
double psi(const BranchingSpec& spec, double s);

/// Smallest fixed point of psi in [0, 1): bisection on [0, 1 - 1e-9] to 1e-12.
/// Returns 0 when m >= 1. When b <= 1 there is no root below 1 and the result is 1.
double extinction_prob(const BranchingSpec& spec);

/// Fixed-point iterate f^(depth)(0) for f(s) = (1 - p + p s)^D: the exact
/// probability that a p-percolated D-ary tree has no retained path of length depth.
double binomial_extinction_by(int D, double p, int depth);

struct BranchingSim {
  std::size_t runs = 0;
  std::size_t extinct = 0;
  double q_hat() const { return runs ? static_cast<double>(extinct) / static_cast<double>(runs) : 0.0; }
};

/// Galton-Watson runs with the two-point offspring law (m w.p. 1-pi, M w.p. pi,
/// pi = (b-m)/(M-m)), whose generating function is psi. A run counts as
/// surviving once the population reaches `cap` or lives `generations` steps.
/// `extinct_per_run`, when given, receives 1 for each extinct run.
BranchingSim simulate_branching(const BranchingSpec& spec, std::size_t runs, std::uint64_t seed,
                                int generations = 200, std::uint64_t cap = 10'000,
                                Exec exec = Exec::parallel, std::vector<std::uint8_t>* extinct_per_run = nullptr);

struct PercolationResult {
  std::uint64_t component_size = 0;  // retained nodes connected to the root (saturating)
  int depth_reached = 0;             // deepest generation reached from the root
  bool survived = false;             // reached the last generation
};

/// Keeps each edge of T independently with probability p.
PercolationResult percolate_tree(const WhitneyTree& T, double p, std::uint64_t seed);

/// Same on an implicit deterministic D-ary tree of the given depth, drawing
/// whole generations binomially.
PercolationResult percolate_regular(int D, int depth, double p, std::uint64_t seed);

struct SurvivalEstimate {
  std::size_t trials = 0;
  std::size_t survived = 0;
  double frequency() const { return trials ? static_cast<double>(survived) / static_cast<double>(trials) : 0.0; }
};

/// percolate_regular over seeds derive_seed(seed, k), k < trials.
SurvivalEstimate percolation_survival(int D, int depth, double p, std::size_t trials, std::uint64_t seed,
                                      Exec exec = Exec::parallel);

}  // namespace flab
