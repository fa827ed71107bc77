#ifndef FLUIDLIM_RANDOM_WALK_HPP
#define FLUIDLIM_RANDOM_WALK_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "fluidlim/fluid_ode.hpp"
#include "fluidlim/jump_model.hpp"

namespace fluidlim {

/// Draws one unscaled step U of the walk.
struct IncrementSampler {
  std::string name;
  double mean = 0.0;
  double variance = 0.0;
  std::function<double(RngStream&)> draw;
};

IncrementSampler normal_increments(double mean, double variance);
IncrementSampler bernoulli_increments(double p);
IncrementSampler constant_increments(double value);

/// Rescaled random walk on the line: steps U/N at constant rate N, so the
/// fluid limit is y[t] = t mu. D = S = R.
class RandomWalkModel final : public JumpModel {
 public:
  RandomWalkModel(IncrementSampler sampler, std::int64_t N);

  const IncrementSampler& sampler() const { return sampler_; }

  std::size_t dim() const override { return 1; }
  std::int64_t scale() const override { return N_; }
  double rate(const StateVector&) const override { return static_cast<double>(N_); }
  StateVector sample_increment(const StateVector& x, RngStream& rng) const override;
  StateVector mean_increment(const StateVector& x) const override;
  double second_moment_bound(const StateVector& x) const override;
  bool in_D(const StateVector& x) const override { return x.dim() == 1; }
  bool in_S(const StateVector& x) const override { return x.dim() == 1; }

 private:
  IncrementSampler sampler_;
  std::int64_t N_;
};

struct WalkInstance {
  std::shared_ptr<const RandomWalkModel> model;
  StateVector x0;
};

/// Throws std::invalid_argument if the sampler's declared moments disagree
/// with (mu, sigma2) or N < 1.
WalkInstance random_walk_model(double mu, double sigma2, IncrementSampler sampler, std::int64_t N);

/// b == mu, lambda = 0, y[t] = t mu.
VectorField walk_limit_field(double mu);

/// kappa2 = 1, kappa3 = sigma2 + mu^2, a = 0.
ScalingAssumptions walk_assumptions(double mu, double sigma2);

}  // namespace fluidlim

#endif  // FLUIDLIM_RANDOM_WALK_HPP
