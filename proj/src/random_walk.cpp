#include "fluidlim/random_walk.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidlim {

IncrementSampler normal_increments(double mean, double variance) {
  if (!(variance >= 0.0)) throw std::invalid_argument("normal_increments: variance must be >= 0");
  const double sd = std::sqrt(variance);
  return {"normal", mean, variance, [mean, sd](RngStream& rng) { return mean + sd * rng.normal(); }};
}

IncrementSampler bernoulli_increments(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli_increments: p must be in [0, 1]");
  return {"bernoulli", p, p * (1.0 - p), [p](RngStream& rng) { return rng.bernoulli(p) ? 1.0 : 0.0; }};
}

IncrementSampler constant_increments(double value) {
  return {"constant", value, 0.0, [value](RngStream&) { return value; }};
}

RandomWalkModel::RandomWalkModel(IncrementSampler sampler, std::int64_t N)
    : sampler_(std::move(sampler)), N_(N) {
  if (N_ < 1) throw std::invalid_argument("random walk: N must be >= 1");
  if (!sampler_.draw) throw std::invalid_argument("random walk: sampler has no draw function");
}

StateVector RandomWalkModel::sample_increment(const StateVector&, RngStream& rng) const {
  return StateVector{sampler_.draw(rng) / static_cast<double>(N_)};
}

StateVector RandomWalkModel::mean_increment(const StateVector&) const {
  return StateVector{sampler_.mean / static_cast<double>(N_)};
}

double RandomWalkModel::second_moment_bound(const StateVector&) const {
  const double n = static_cast<double>(N_);
  return (sampler_.variance + sampler_.mean * sampler_.mean) / (n * n);
}

WalkInstance random_walk_model(double mu, double sigma2, IncrementSampler sampler, std::int64_t N) {
  constexpr double tol = 1e-12;
  if (std::abs(sampler.mean - mu) > tol || std::abs(sampler.variance - sigma2) > tol) {
    throw std::invalid_argument("random_walk_model: sampler moments do not match (mu, sigma2)");
  }
  return {std::make_shared<const RandomWalkModel>(std::move(sampler), N), StateVector{0.0}};
}

VectorField walk_limit_field(double mu) {
  VectorField f;
  f.dim = 1;
  f.b = [mu](const StateVector&) { return StateVector{mu}; };
  f.lipschitz_lambda = 0.0;
  f.closed_form = [mu](double t) { return StateVector{t * mu}; };
  return f;
}

ScalingAssumptions walk_assumptions(double mu, double sigma2) {
  ScalingAssumptions a;
  a.kappa1 = [](double) { return 0.0; };
  a.kappa2 = 1.0;
  a.kappa3 = sigma2 + mu * mu;
  a.limit_point = StateVector{0.0};
  return a;
}

}  // namespace fluidlim
