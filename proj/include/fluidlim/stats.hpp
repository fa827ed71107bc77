#ifndef FLUIDLIM_STATS_HPP
#define FLUIDLIM_STATS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fluidlim {

inline constexpr double kZ95 = 1.959963984540054;

struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double half_width() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval; well defined at 0 and n successes.
Proportion wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> xs);
double standard_error(std::span<const double> xs);
/// Median of a copy of xs; throws on empty input.
double median(std::span<const double> xs);

/// Least-squares slope of y against x; absent with fewer than 3 points.
std::optional<double> ls_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fluidlim

#endif  // FLUIDLIM_STATS_HPP
