#include "fluidlim/flip_chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace fluidlim {

FlipChain::FlipChain(double flip_p, double rate_zero, double rate_one)
    : flip_p_(flip_p), rate_zero_(rate_zero), rate_one_(rate_one) {
  if (!(flip_p_ >= 0.0 && flip_p_ <= 1.0)) throw std::invalid_argument("FlipChain: flip_p must be in [0, 1]");
  if (!(rate_zero_ > 0.0) || !(rate_one_ > 0.0)) throw std::invalid_argument("FlipChain: rates must be positive");
}

bool FlipChain::in_D(const StateVector& x) const {
  return x.dim() == 1 && (x[0] == 0.0 || x[0] == 1.0);
}

double FlipChain::rate(const StateVector& x) const { return x[0] == 0.0 ? rate_zero_ : rate_one_; }

StateVector FlipChain::sample_increment(const StateVector& x, RngStream& rng) const {
  return StateVector{rng.bernoulli(flip_p_) ? 1.0 - 2.0 * x[0] : 0.0};
}

StateVector FlipChain::advance(const StateVector& x, RngStream& rng) const {
  return StateVector{rng.bernoulli(flip_p_) ? 1.0 - x[0] : x[0]};
}

StateVector FlipChain::mean_increment(const StateVector& x) const {
  return StateVector{flip_p_ * (1.0 - 2.0 * x[0])};
}

double FlipChain::second_moment_bound(const StateVector&) const {
  // Var + mean^2 of a +-1 step taken with probability p.
  return flip_p_;
}

BoundInputs FlipChain::bound_inputs(double u, double delta) const {
  return BoundInputs{flip_p_, std::max(rate_zero_, rate_one_), u, delta};
}

}  // namespace fluidlim
