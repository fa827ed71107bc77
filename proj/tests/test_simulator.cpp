#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fluidlim/errors.hpp"
#include "fluidlim/particle_model.hpp"
#include "fluidlim/simulator.hpp"
#include "fluidlim/stats.hpp"
#include "oracles.hpp"

using namespace fluidlim;

namespace {

ParticleSystemParams params_w2(std::int64_t N) {
  ParticleSystemParams p;
  p.w = 2;
  p.mu = 1.0;
  p.kappa = 2.0;
  p.N = N;
  return p;
}

StateMap drift_of(const JumpModel& m) {
  return [&m](const StateVector& x) { return drift(m, x); };
}

Trajectory particle_path(std::int64_t N, std::uint64_t seed, double u = 1.0) {
  ParticleModel model(params_w2(N), N);
  SimConfig cfg;
  cfg.horizon_u = u;
  cfg.master_seed = seed;
  return simulate_replicate(model, model.initial_state(), cfg, 0);
}

}  // namespace

TEST_CASE("zero rate gives a single-state rate-vanished trajectory") {
  oracle::DeterministicStepModel model(0.0, 1.0, 1);
  RngStream rng(1);
  SimConfig cfg;
  const Trajectory t = simulate(model, StateVector{0.25}, cfg, rng);
  CHECK(t.states.size() == 1);
  CHECK(t.jump_times == std::vector<double>{0.0});
  CHECK(t.terminated_reason == Termination::rate_vanished);
  CHECK(std::string(to_string(t.terminated_reason)) == "rate-vanished");
}

TEST_CASE("particle chain stops when no heavy particle is left") {
  ParticleModel model(params_w2(10), 4);
  SimConfig cfg;
  cfg.horizon_u = 1000.0;
  const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, 3);
  CHECK(t.terminated_reason == Termination::rate_vanished);
  CHECK(t.num_jumps() == 4);
  CHECK(t.states.back()[2] == doctest::Approx(0.4));
}

TEST_CASE("mean jump count matches the binomial death count") {
  // Every heavy particle leaves at rate 1, so jumps by u ~ Binomial(B, 1 - e^{-u}).
  const std::int64_t N = 200;
  const double u = 0.8;
  ParticleModel model(params_w2(N), N);
  SimConfig cfg;
  cfg.horizon_u = u;
  cfg.master_seed = 77;
  std::vector<double> counts;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    counts.push_back(static_cast<double>(simulate_replicate(model, model.initial_state(), cfg, r).num_jumps()));
  }
  const double p = 1.0 - std::exp(-u);
  const double expected = N * p;
  const double se = std::sqrt(N * p * (1.0 - p) / counts.size());
  CHECK(std::abs(mean(counts) - expected) <= 5.0 * se);
  CHECK(sample_sd(counts) == doctest::Approx(std::sqrt(N * p * (1.0 - p))).epsilon(0.1));
}

TEST_CASE("same seed gives an identical trajectory") {
  const Trajectory a = particle_path(300, 9);
  const Trajectory b = particle_path(300, 9);
  const Trajectory c = particle_path(300, 10);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("trajectory structure") {
  ParticleModel model(params_w2(100), 100);
  SimConfig cfg;
  cfg.horizon_u = 1.5;
  cfg.master_seed = 4;
  RngStream rng = RngStream::derive(4, 0);
  const Trajectory t = simulate(model, model.initial_state(), cfg, rng);
  CHECK(t.jump_times.front() == 0.0);
  CHECK(t.states.front() == model.initial_state());
  for (std::size_t i = 1; i < t.jump_times.size(); ++i) {
    CHECK(t.jump_times[i] > t.jump_times[i - 1]);
    CHECK(t.jump_times[i] <= cfg.horizon_u);
    // Y at an event time is the chain state after that event.
    CHECK(t.state_at(t.jump_times[i]) == t.states[i]);
    CHECK(t.states[i][2] == doctest::Approx(static_cast<double>(i) / 100).epsilon(1e-15));
  }
  CHECK(t.terminated_reason == Termination::horizon_reached);
}

TEST_CASE("simulate errors") {
  ParticleModel model(params_w2(10), 10);
  SimConfig cfg;
  RngStream rng(0);
  CHECK_THROWS_AS(simulate(model, StateVector{0.1, 0.5, 0.0}, cfg, rng), std::domain_error);
  SimConfig bad;
  bad.horizon_u = 0.0;
  CHECK_THROWS_AS(simulate(model, model.initial_state(), bad, rng), std::invalid_argument);
  SimConfig tiny;
  tiny.max_jumps = 2;
  tiny.horizon_u = 100.0;
  CHECK_THROWS_AS(simulate(model, model.initial_state(), tiny, rng), InvariantBreach);
}

TEST_CASE("default max jumps") {
  CHECK(default_max_jumps(2.0, 100, 1.0) == 1800);
  CHECK(default_max_jumps(0.5, 10, 0.3) == 1006);
}

TEST_CASE("exit_time") {
  SUBCASE("path inside S has no exit") {
    oracle::DeterministicStepModel model(5.0, 0.0, 1);
    SimConfig cfg;
    RngStream rng(5);
    CHECK_FALSE(exit_time(simulate(model, StateVector{0.0}, cfg, rng)).has_value());
  }
  SUBCASE("exit at the third state") {
    Trajectory t;
    t.jump_times = {0.0, 0.4, 0.9, 1.3};
    t.states = {StateVector{0.0}, StateVector{0.5}, StateVector{1.0}, StateVector{1.5}};
    t.exited_S_at = 2;
    CHECK(exit_time(t) == 0.9);
  }
  SUBCASE("stop on exit records the exit index") {
    auto p = params_w2(400);
    p.time_cap = 0.5;
    ParticleModel model(p, 400);
    SimConfig cfg;
    cfg.horizon_u = 3.0;
    cfg.stop_on_exit = true;
    const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, 0);
    REQUIRE(t.exited_S_at.has_value());
    CHECK(*t.exited_S_at == t.states.size() - 1);
    CHECK(t.terminated_reason == Termination::exited_S);
    CHECK(t.states.back()[2] == doctest::Approx(0.5));
    CHECK(std::abs(*exit_time(t) - std::log(2.0)) < 0.25);
  }
  SUBCASE("starting outside S exits at time zero") {
    auto p = params_w2(10);
    p.kappa = 1.5;
    ParticleModel model(p, 20);
    SimConfig cfg;
    RngStream rng(1);
    const Trajectory t = simulate(model, model.initial_state(), cfg, rng);
    CHECK(exit_time(t) == 0.0);
  }
}

TEST_CASE("compensator with zero and constant fields") {
  const Trajectory t = particle_path(50, 2);
  const auto zero = compensator_path(t, [](const StateVector&) { return StateVector(3); });
  for (double s : {0.0, 0.3, 0.77, 1.0}) CHECK(zero.at(s) == t.states.front());

  Trajectory one;
  one.jump_times = {0.0, 0.5};
  one.states = {StateVector{1.0}, StateVector{2.0}};
  one.horizon = 1.0;
  const StateVector v{0.25};
  const auto a = compensator_path(one, [&](const StateVector&) { return v; });
  for (double s : {0.0, 0.2, 0.5, 0.9}) CHECK(a.at(s)[0] == doctest::Approx(1.0 + 0.25 * s).epsilon(1e-15));
}

TEST_CASE("compensator matches piecewise quadrature") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ParticleModel model(params_w2(100), 100);
    SimConfig cfg;
    cfg.master_seed = seed;
    const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, 0);
    const auto a = compensator_path(t, drift_of(model));
    RngStream pick(seed + 1000);
    for (int i = 0; i < 20; ++i) {
      const double s = pick.uniform();
      const StateVector oracle_value = t.states.front() + oracle::integral_of_path(t, drift_of(model), s);
      CHECK(distance(a.at(s), oracle_value) <= 1e-12);
    }
  }
}

TEST_CASE("martingale with zero field is the displacement") {
  const Trajectory t = particle_path(80, 3);
  const auto m = martingale_path(t, [](const StateVector&) { return StateVector(3); });
  for (std::size_t n = 0; n < t.states.size(); ++n) {
    CHECK(distance(m.knot_values[n], t.states[n] - t.states.front()) <= 1e-15);
  }
  CHECK(m.left_limits.front() == StateVector(3));
}

TEST_CASE("A + M = Y at random times") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ParticleModel model(params_w2(150), 150);
    SimConfig cfg;
    cfg.master_seed = seed;
    const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, 0);
    const auto a = compensator_path(t, drift_of(model));
    const auto m = martingale_path(t, drift_of(model));
    RngStream pick(seed);
    for (int i = 0; i < 100; ++i) {
      const double s = pick.uniform();
      CHECK(distance(a.at(s) + m.at(s), t.state_at(s)) <= 1e-12);
    }
  }
}

TEST_CASE("martingale left limits and slopes") {
  ParticleModel model(params_w2(60), 60);
  SimConfig cfg;
  cfg.master_seed = 12;
  const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, 0);
  const auto m = martingale_path(t, drift_of(model));
  for (std::size_t n = 1; n < t.states.size(); ++n) {
    const StateVector jump = t.states[n] - t.states[n - 1];
    CHECK(distance(m.knot_values[n] - m.left_limits[n], jump) <= 1e-12);
    CHECK(distance(m.slopes[n], -1.0 * drift(model, t.states[n])) <= 1e-15);
  }
}

TEST_CASE("martingale sup norm against dense sampling") {
  ParticleModel model(params_w2(40), 40);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SimConfig cfg;
    cfg.master_seed = seed;
    const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, 0);
    const auto m = martingale_path(t, drift_of(model));
    const double u = 0.9;
    const int points = 200000;
    const double sampled = oracle::sampled_sup([&](double s) { return m.at(s); }, u, points);
    double max_slope = 0.0;
    for (const auto& s : m.slopes) max_slope = std::max(max_slope, s.norm());
    const double exact = m.sup_norm(u);
    CHECK(sampled <= exact + 1e-12);
    CHECK(exact <= sampled + 2.0 * max_slope * u / points + 1e-12);
  }
}

TEST_CASE("martingale mean is near zero") {
  const std::int64_t N = 50;
  ParticleModel model(params_w2(N), N);
  SimConfig cfg;
  cfg.master_seed = 31;
  std::vector<std::vector<double>> comps(3);
  for (std::uint64_t r = 0; r < 1000; ++r) {
    const Trajectory t = simulate_replicate(model, model.initial_state(), cfg, r);
    const StateVector mu = martingale_path(t, drift_of(model)).at(1.0);
    for (int k = 0; k < 3; ++k) comps[k].push_back(mu[k]);
  }
  for (int k = 1; k < 3; ++k) {
    CHECK(std::abs(mean(comps[k])) <= 4.0 * standard_error(comps[k]));
  }
  CHECK(mean(comps[0]) == 0.0);
}

TEST_CASE("jump counts stay under the Poisson domination level") {
  const std::int64_t N = 500;
  ParticleModel model(params_w2(N), N);
  SimConfig cfg;
  cfg.master_seed = 8;
  const double kappa2 = 2.0;
  const double u = 1.0;
  const double level = kappa2 * N * u + 5.0 * std::sqrt(kappa2 * N * u);
  for (std::uint64_t r = 0; r < 50; ++r) {
    CHECK(simulate_replicate(model, model.initial_state(), cfg, r).num_jumps() <= level);
  }
}
