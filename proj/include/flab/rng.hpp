#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace flab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Every draw is a pure function of (key, counter), so a sample at index k can
/// be produced without generating the k-1 before it. This is what gives the
/// samplers their prefix property and makes results independent of thread count.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}
  explicit Philox4x32(Key key) : key_(key) {}

  Counter operator()(Counter ctr) const;

  /// Four 32-bit words for the 64-bit block index `i`.
  Counter block(std::uint64_t i) const {
    return (*this)({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0u, 0u});
  }

  const Key& key() const { return key_; }

 private:
  Key key_;
};

/// SplitMix64 finalizer; used for sub-stream key derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Sub-stream key for (master seed, stream id). Streams used by the library:
///   0 = Brownian increments, 1 = kill time, 2 = lattice walk steps,
///   3 = Monte-Carlo placement, 4 = percolation / branching draws.
/// Trial-level seeds come from derive_seed(seed, trial) and are then split again.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

namespace stream {
inline constexpr std::uint64_t increments = 0;
inline constexpr std::uint64_t kill_time = 1;
inline constexpr std::uint64_t lattice = 2;
inline constexpr std::uint64_t placement = 3;
inline constexpr std::uint64_t branching = 4;
}  // namespace stream

/// Uniform in the open interval (0, 1) from two 32-bit words (53 bits).
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

/// Two independent standard normals from one Philox block (Box-Muller).
std::pair<double, double> normal_pair(const Philox4x32::Counter& words);

/// Sequential convenience stream over a Philox key, for consumers that draw an
/// unbounded, data-dependent number of variates (rejection sampling, percolation).
class PhiloxStream {
 public:
  explicit PhiloxStream(std::uint64_t key) : gen_(key) {}

  using result_type = std::uint32_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xFFFFFFFFu; }
  result_type operator()() { return next_u32(); }

  std::uint32_t next_u32();
  double uniform() {
    const std::uint32_t hi = next_u32();
    return uniform_open(hi, next_u32());
  }

 private:
  Philox4x32 gen_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int used_ = 4;
};

}  // namespace flab
