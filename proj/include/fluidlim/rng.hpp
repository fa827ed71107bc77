#ifndef FLUIDLIM_RNG_HPP
#define FLUIDLIM_RNG_HPP

#include <cstdint>
#include <random>

namespace fluidlim {

/// An independent random stream. Streams are derived from a master seed and
/// a counter tuple through SplitMix64 mixing, so replicate i of a run always
/// sees the same numbers regardless of thread scheduling.
///
/// All variates are built from raw 64-bit engine output with explicit
/// formulas (no std::*_distribution), which keeps the streams identical
/// across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  static RngStream derive(std::uint64_t master_seed, std::uint64_t index);
  static RngStream derive(std::uint64_t master_seed, std::uint64_t group, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on (0, 1]; never returns 0.
  double uniform_open_closed();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  double exponential(double rate);
  double normal();
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fluidlim

#endif  // FLUIDLIM_RNG_HPP
