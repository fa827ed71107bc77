#ifndef FLUIDLIM_FLIP_CHAIN_HPP
#define FLUIDLIM_FLIP_CHAIN_HPP

#include "fluidlim/bounds.hpp"
#include "fluidlim/jump_model.hpp"

namespace fluidlim {

/// Two-state chain on {0, 1}: at each event the state flips with probability
/// flip_p and otherwise stays. The clock runs at rate_zero in 0 and rate_one
/// in 1. Unscaled (scale 1); the small test-bed for the maximal inequality.
class FlipChain final : public JumpModel {
 public:
  FlipChain(double flip_p, double rate_zero, double rate_one);

  std::size_t dim() const override { return 1; }
  std::int64_t scale() const override { return 1; }
  double rate(const StateVector& x) const override;
  StateVector sample_increment(const StateVector& x, RngStream& rng) const override;
  StateVector mean_increment(const StateVector& x) const override;
  double second_moment_bound(const StateVector& x) const override;
  bool in_D(const StateVector& x) const override;
  bool in_S(const StateVector& x) const override { return in_D(x); }
  StateVector advance(const StateVector& x, RngStream& rng) const override;

  /// C1 = flip_p (exact sup of the second moment), C2 = max rate.
  BoundInputs bound_inputs(double u, double delta) const;

 private:
  double flip_p_;
  double rate_zero_;
  double rate_one_;
};

}  // namespace fluidlim

#endif  // FLUIDLIM_FLIP_CHAIN_HPP
