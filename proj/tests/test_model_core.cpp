#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fluidlim/jump_model.hpp"
#include "fluidlim/particle_model.hpp"
#include "fluidlim/random_walk.hpp"
#include "fluidlim/state_vector.hpp"
#include "oracles.hpp"

using namespace fluidlim;

namespace {

// Constant rate, deterministic increment, one dimension; S = {x < 1}.
class ProbeModel final : public JumpModel {
 public:
  ProbeModel(double rate, double step, std::int64_t N) : rate_(rate), step_(step), N_(N) {}
  std::size_t dim() const override { return 1; }
  std::int64_t scale() const override { return N_; }
  double rate(const StateVector&) const override { return rate_; }
  StateVector sample_increment(const StateVector&, RngStream&) const override { return StateVector{step_}; }
  StateVector mean_increment(const StateVector&) const override { return StateVector{step_}; }
  double second_moment_bound(const StateVector&) const override { return step_ * step_; }
  bool in_D(const StateVector& x) const override { return x[0] <= 1.0; }
  bool in_S(const StateVector& x) const override { return x[0] < 1.0; }

 private:
  double rate_;
  double step_;
  std::int64_t N_;
};

ParticleSystemParams particle_params(std::int64_t w, std::int64_t N) {
  ParticleSystemParams p;
  p.w = w;
  p.mu = 1.0;
  p.kappa = 2.0;
  p.N = N;
  return p;
}

}  // namespace

TEST_CASE("state vectors reject non-finite coordinates") {
  CHECK_THROWS_AS(StateVector({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector({INFINITY}), std::invalid_argument);
  StateVector a{3.0, 4.0};
  CHECK(a.norm() == doctest::Approx(5.0));
  CHECK(distance(a, StateVector{0.0, 0.0}) == doctest::Approx(5.0));
  CHECK_THROWS(distance(a, StateVector{1.0}));
}

TEST_CASE("drift of the large-N particle formula") {
  const StateVector x{1.0, 0.3, 0.4};
  const StateVector b = large_n_drift(x, 2, 10);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(b[2] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("drift of the exact particle model at the same point") {
  ParticleModel model(particle_params(2, 10), 10);
  const StateVector x{1.0, 0.3, 0.4};
  const StateVector b = drift(model, x);
  // 10 particles, 3 inert removed (3 excitations), 4 steps: I = 9 - 3 - 3 = 3, H = 6.
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(b[2] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("zero mean increment gives zero drift") {
  ProbeModel model(7.0, 0.0, 10);
  CHECK(drift(model, StateVector{0.2}) == StateVector{0.0});
}

TEST_CASE("random walk drift equals mu everywhere") {
  auto inst = random_walk_model(0.7, 1.0, normal_increments(0.7, 1.0), 50);
  for (double x : {-3.0, 0.0, 2.5}) {
    CHECK(drift(*inst.model, StateVector{x})[0] == doctest::Approx(0.7).epsilon(1e-14));
  }
}

TEST_CASE("drift outside D is a domain error") {
  ProbeModel model(1.0, 0.1, 10);
  CHECK_THROWS_AS(drift(model, StateVector{2.0}), std::domain_error);
  ParticleModel pm(particle_params(2, 10), 10);
  CHECK_THROWS_AS(drift(pm, StateVector{0.5, 0.4, 0.0}), std::domain_error);
}

TEST_CASE("drift is homogeneous under rate and increment rescaling") {
  ParticleModel pm(particle_params(3, 60), 60);
  oracle::RescaledModel doubled(pm, 2.0);
  const auto probes = lattice_grid(StateVector{1.0, 0.0, 0.0}, StateVector{1.0, 0.6, 0.9}, 7,
                                   [&](const StateVector& x) { return pm.in_S(x); });
  REQUIRE(!probes.empty());
  for (const auto& x : probes) {
    const StateVector d1 = drift(pm, x);
    const StateVector d2 = drift(doubled, x);
    CHECK(distance(d1, d2) <= 1e-12);
  }
}

TEST_CASE("validate_scaling on the particle model") {
  for (std::int64_t w : {2, 3, 5}) {
    auto params = particle_params(w, 120);
    ParticleModel pm(params, 120);
    const auto probes = lattice_grid(StateVector{0.0, 0.0, 0.0}, StateVector{1.9, 1.9, 1.9}, 12,
                                     [&](const StateVector& x) { return pm.in_S(x); });
    REQUIRE(probes.size() > 10);
    const auto report = validate_scaling(pm, particle_assumptions(params), probes);
    CHECK(report.holds());
    CHECK(report.max_rate_ratio <= 1.0);
    CHECK(report.max_moment_ratio <= 1.0);
  }
}

TEST_CASE("validate_scaling with all probes at the limit point") {
  ProbeModel model(50.0, 0.01, 100);
  ScalingAssumptions a;
  a.kappa2 = 1.0;
  a.kappa3 = 2.0;
  a.limit_point = StateVector{0.0};
  const auto report = validate_scaling(model, a, std::vector<StateVector>(4, StateVector{0.0}));
  CHECK(report.holds());
  CHECK(report.max_rate_ratio == doctest::Approx(0.5));
  CHECK(report.max_rate_ratio < 1.0);
}

TEST_CASE("validate_scaling flags a rate twice the bound") {
  ProbeModel model(200.0, 0.01, 100);
  ScalingAssumptions a;
  a.kappa2 = 1.0;
  a.kappa3 = 1.0;
  const std::vector<StateVector> probes{StateVector{0.0}, StateVector{0.5}};
  const auto report = validate_scaling(model, a, probes);
  REQUIRE(!report.holds());
  CHECK(report.violations.size() == 2);
  CHECK(report.violations[0].probe_index == 0);
  CHECK(report.violations[1].probe_index == 1);
  CHECK(report.violations[0].rate_ratio == doctest::Approx(2.0));
  CHECK(report.max_rate_ratio == doctest::Approx(2.0));
}

TEST_CASE("validate_scaling input errors") {
  ProbeModel model(1.0, 0.01, 100);
  ScalingAssumptions a;
  a.kappa2 = 1.0;
  a.kappa3 = 1.0;
  CHECK_THROWS_AS(validate_scaling(model, a, {}), std::invalid_argument);
  CHECK_THROWS_AS(validate_scaling(model, a, {StateVector{1.0}}), std::invalid_argument);
}

TEST_CASE("in_S implies in_D on probe grids") {
  for (std::int64_t w : {2, 4}) {
    auto params = particle_params(w, 40);
    params.time_cap = 0.5;
    ParticleModel pm(params, 40);
    const auto grid = lattice_grid(StateVector{-0.5, -0.5, -0.5}, StateVector{2.5, 2.5, 2.5}, 15,
                                   [](const StateVector&) { return true; });
    std::size_t in_s = 0;
    for (const auto& x : grid) {
      if (pm.in_S(x)) {
        ++in_s;
        CHECK(pm.in_D(x));
      }
    }
    CHECK(in_s > 0);
  }
}

TEST_CASE("sample mean of increments matches mean_increment") {
  auto params = particle_params(3, 90);
  ParticleModel pm(params, 90);
  RngStream rng(2024);
  const std::vector<StateVector> probes{pm.initial_state(), ParticleState{90, 18, 27}.coords(90),
                                        ParticleState{90, 36, 50}.coords(90)};
  const int draws = 10000;
  for (const auto& x : probes) {
    REQUIRE(pm.in_D(x));
    std::vector<double> sum(3, 0.0);
    std::vector<double> sumsq(3, 0.0);
    for (int i = 0; i < draws; ++i) {
      const StateVector inc = pm.sample_increment(x, rng);
      for (int k = 0; k < 3; ++k) {
        sum[k] += inc[k];
        sumsq[k] += inc[k] * inc[k];
      }
    }
    const StateVector m = pm.mean_increment(x);
    for (int k = 0; k < 3; ++k) {
      const double mean = sum[k] / draws;
      const double var = std::max(0.0, sumsq[k] / draws - mean * mean);
      const double se = std::sqrt(var / draws);
      CHECK(std::abs(mean - m[k]) <= 5.0 * se + 1e-15);
    }
  }

  auto walk = random_walk_model(0.5, 0.25, bernoulli_increments(0.5), 20);
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = walk.model->sample_increment(StateVector{0.0}, rng)[0];
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  CHECK(std::abs(mean - walk.model->mean_increment(StateVector{0.0})[0]) <= 5.0 * se);
}

TEST_CASE("lattice_grid covers the box") {
  const auto g = lattice_grid(StateVector{0.0, 0.0}, StateVector{1.0, 2.0}, 3,
                              [](const StateVector&) { return true; });
  CHECK(g.size() == 9);
  const auto kept = lattice_grid(StateVector{0.0, 0.0}, StateVector{1.0, 2.0}, 3,
                                 [](const StateVector& x) { return x[0] < 0.75; });
  CHECK(kept.size() == 6);
}
