#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fluidlim/convergence.hpp"
#include "fluidlim/io.hpp"
#include "fluidlim/stats.hpp"

using namespace fluidlim;

namespace {

ParticleSystemParams particle_params(std::int64_t N = 100) {
  ParticleSystemParams p;
  p.w = 2;
  p.mu = 1.0;
  p.kappa = 2.0;
  p.N = N;
  return p;
}

FluidSolution constant_solution(const StateVector& a, double horizon) {
  VectorField zero;
  zero.dim = a.dim();
  zero.b = [d = a.dim()](const StateVector&) { return StateVector(d); };
  return integrate(zero, a, horizon, 0.01);
}

// Golden value: median sup-deviation of the w = 2, mu = 1, sigma2 = 0 particle
// chain at N = 400, u = 1, 500 replicates, seed 20240501.
constexpr double kGoldenMedian400 = 0.047499061933014;

}  // namespace

TEST_CASE("sup deviation of a path that never jumps") {
  Trajectory t;
  t.jump_times = {0.0};
  t.states = {StateVector{0.5, -0.25}};
  t.horizon = 1.0;
  CHECK(sup_deviation(t, constant_solution(StateVector{0.5, -0.25}, 1.0), 1.0) == 0.0);
}

TEST_CASE("sup deviation of a single jump") {
  Trajectory t;
  t.jump_times = {0.0, 0.4};
  t.states = {StateVector{1.0, 1.0}, StateVector{1.3, 0.6}};
  t.horizon = 1.0;
  const auto sol = constant_solution(StateVector{1.0, 1.0}, 1.0);
  CHECK(sup_deviation(t, sol, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sup_deviation(t, sol, 0.3) == 0.0);
}

TEST_CASE("sup deviation input errors") {
  Trajectory t;
  t.jump_times = {0.0};
  t.states = {StateVector{0.5}};
  t.horizon = 1.0;
  CHECK_THROWS_AS(sup_deviation(t, constant_solution(StateVector{0.5, 0.0}, 1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sup_deviation(t, constant_solution(StateVector{0.5}, 0.5), 1.0), std::invalid_argument);
}

TEST_CASE("sup deviation includes grid points between jumps") {
  // Y stays at 0 while y = t moves: the sup at u = 1 is 1, found at u itself.
  Trajectory t;
  t.jump_times = {0.0};
  t.states = {StateVector{0.0}};
  t.horizon = 2.0;
  const auto sol = integrate(walk_limit_field(1.0), StateVector{0.0}, 2.0, 0.1);
  CHECK(sup_deviation(t, sol, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sup_deviation(t, sol, 0.55) == doctest::Approx(0.55).epsilon(1e-14));
}

TEST_CASE("golden median sup deviation at N = 400") {
  LadderConfig cfg;
  cfg.u = 1.0;
  cfg.delta = 0.05;
  cfg.master_seed = 20240501;
  cfg.replicates = 500;
  cfg.N_ladder = {400};
  const auto report = run_ladder(particle_family(particle_params()), cfg);
  const double med = report.per_N.front().median_sup_dev;
  CHECK(med == doctest::Approx(kGoldenMedian400).epsilon(1e-12));

  const auto field = particle_limit_field(particle_params());
  const double scale = std::sqrt(3.0 / 400.0) * std::exp(*field.lipschitz_lambda) * std::sqrt(2.0 * 1.0);
  CHECK(med <= 3.0 * scale);
  CHECK(med > 0.0);
}

TEST_CASE("noiseless walk has no exceedance") {
  SUBCASE("zero steps") {
    const auto family = walk_family(0.0, 0.0, constant_increments(0.0));
    LadderConfig cfg;
    cfg.delta = 0.1;
    cfg.replicates = 100;
    cfg.N_ladder = {100, 400, 1600};
    const auto report = run_ladder(family, cfg);
    for (const auto& p : report.per_N) {
      CHECK(p.median_sup_dev == 0.0);
      CHECK(p.exceedance.successes == 0);
    }
    CHECK_FALSE(report.slope_median_dev.has_value());
    CHECK_FALSE(report.slope_exceedance.has_value());
  }
  SUBCASE("deterministic positive steps") {
    const auto family = walk_family(0.25, 0.0, constant_increments(0.25));
    LadderConfig cfg;
    cfg.delta = 0.1;
    cfg.replicates = 200;
    cfg.N_ladder = {400, 1600, 6400};
    const auto report = run_ladder(family, cfg);
    for (const auto& p : report.per_N) CHECK(p.exceedance.successes == 0);
    REQUIRE(report.slope_median_dev.has_value());
    CHECK(*report.slope_median_dev < 0.0);
  }
}

TEST_CASE("ladder report structure") {
  LadderConfig cfg;
  cfg.u = 1.0;
  cfg.delta = 0.05;
  cfg.master_seed = 3;
  cfg.replicates = 150;
  cfg.N_ladder = {50, 100, 200};
  cfg.keep_samples = true;
  const auto report = run_ladder(particle_family(particle_params()), cfg);
  REQUIRE(report.per_N.size() == 3);
  CHECK(report.samples.size() == 450);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = report.per_N[i];
    CHECK(p.N == cfg.N_ladder[i]);
    CHECK(p.exceedance.lo <= p.exceedance.estimate);
    CHECK(p.exceedance.estimate <= p.exceedance.hi);
    CHECK(p.exceedance.lo >= 0.0);
    CHECK(p.exceedance.hi <= 1.0);
    CHECK(p.exit_prob == 0.0);
    CHECK_FALSE(p.median_sigma.has_value());
  }
  for (const auto& s : report.samples) {
    CHECK(s.sup_dev >= 0.0);
    CHECK(s.exited == s.sigma_N.has_value());
  }
  CHECK_FALSE(report.zeta.has_value());
  CHECK(report.fluid_horizon == 1.0);
}

TEST_CASE("ladder validation") {
  const auto family = particle_family(particle_params());
  LadderConfig cfg;
  cfg.replicates = 100;
  cfg.N_ladder = {200, 100};
  CHECK_THROWS_AS(run_ladder(family, cfg), std::invalid_argument);
  cfg.N_ladder = {100, 200};
  cfg.replicates = 99;
  CHECK_THROWS_AS(run_ladder(family, cfg), std::invalid_argument);
  cfg.replicates = 100;
  cfg.delta = 0.0;
  CHECK_THROWS_AS(run_ladder(family, cfg), std::invalid_argument);
  auto capped = particle_params();
  capped.time_cap = 0.5;
  cfg.delta = 0.05;
  cfg.u = 1.0;
  CHECK_THROWS_AS(run_ladder(particle_family(capped), cfg), std::invalid_argument);
}

TEST_CASE("stopped deviation never exceeds the unstopped one") {
  auto params = particle_params();
  params.time_cap = 0.5;
  const auto family = particle_family(params);
  const double u = 0.69;
  const auto sol = integrate(family.field, family.limit_point, u, kDefaultOdeStep, family.in_S);
  int exits_before_u = 0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    RngStream rng = RngStream::derive(17, 200, r);
    const auto inst = family.make(200, rng);
    SimConfig sim;
    sim.horizon_u = u;
    const Trajectory t = simulate(*inst.model, inst.x0, sim, rng);
    if (exit_time(t)) ++exits_before_u;
    CHECK(sup_deviation(t, sol, u) <= sup_deviation_unstopped(t, sol, u));
  }
  CHECK(exits_before_u > 0);
}

TEST_CASE("ladder reports are reproducible and independent of threads") {
  LadderConfig cfg;
  cfg.replicates = 120;
  cfg.N_ladder = {60, 120, 240};
  cfg.master_seed = 11;
  const auto family = particle_family(particle_params());
  setenv("FLUIDLIM_THREADS", "1", 1);
  const std::string one = to_json(run_ladder(family, cfg)).dump(2);
  setenv("FLUIDLIM_THREADS", "4", 1);
  const std::string four = to_json(run_ladder(family, cfg)).dump(2);
  const std::string again = to_json(run_ladder(family, cfg)).dump(2);
  unsetenv("FLUIDLIM_THREADS");
  CHECK(one == four);
  CHECK(four == again);
  cfg.master_seed = 12;
  CHECK(to_json(run_ladder(family, cfg)).dump(2) != one);
}

TEST_CASE("exit time convergence limits") {
  auto params = particle_params();
  params.time_cap = 0.5;
  const auto family = particle_family(params);
  LadderConfig cfg;
  cfg.u = 1.0;
  cfg.replicates = 200;
  cfg.N_ladder = {100, 400};
  SUBCASE("delta beyond the horizon") {
    cfg.delta = 5.0;
    const auto report = exit_time_convergence(family, cfg);
    CHECK(std::abs(report.zeta - std::log(2.0)) < 1e-9);
    CHECK(report.horizon == doctest::Approx(report.zeta + 5.0));
    for (const auto& p : report.per_N) {
      CHECK(p.far_from_zeta.estimate == 0.0);
      CHECK(p.exited_fraction == 1.0);
    }
  }
  SUBCASE("delta near zero") {
    cfg.delta = 1e-9;
    const auto report = exit_time_convergence(family, cfg);
    for (const auto& p : report.per_N) CHECK(p.far_from_zeta.estimate == 1.0);
  }
  SUBCASE("median exit time approaches ln 2") {
    cfg.delta = 0.1;
    cfg.N_ladder = {1600};
    const auto report = exit_time_convergence(family, cfg);
    REQUIRE(report.per_N.front().median_sigma.has_value());
    CHECK(std::abs(*report.per_N.front().median_sigma - std::log(2.0)) < 0.05);
  }
  SUBCASE("no fluid exit is an error") {
    cfg.delta = 0.1;
    CHECK_THROWS_AS(exit_time_convergence(particle_family(particle_params()), cfg), std::invalid_argument);
  }
}

TEST_CASE("WLLN with no increment variance") {
  LadderConfig cfg;
  cfg.replicates = 50;
  cfg.N_ladder = {20, 100, 500};
  const auto report = wlln_check(constant_increments(0.5), cfg, WalkClock::lattice);
  for (const auto& p : report.per_N) {
    CHECK(p.exceedance.successes == 0);
    CHECK(p.chebyshev_bound == 0.0);
    CHECK(p.dominated);
  }
  // The lattice path is off the line by exactly mu / N just before each step.
  cfg.delta = 0.5 / 20 - 1e-12;
  cfg.N_ladder = {20};
  CHECK(wlln_check(constant_increments(0.5), cfg, WalkClock::lattice).per_N.front().exceedance.estimate == 1.0);
}

TEST_CASE("WLLN Bernoulli walk is dominated by the Chebyshev bound") {
  LadderConfig cfg;
  cfg.delta = 0.2;
  cfg.replicates = 1000;
  cfg.N_ladder = {250, 1000};
  cfg.master_seed = 4;
  for (WalkClock clock : {WalkClock::poisson, WalkClock::lattice}) {
    const auto report = wlln_check(bernoulli_increments(0.5), cfg, clock);
    for (const auto& p : report.per_N) {
      CHECK(p.dominated);
      CHECK(p.exceedance.estimate <= p.chebyshev_bound + 3.0 * p.exceedance.half_width());
      CHECK(p.poisson_bound == doctest::Approx(0.5 / (p.N * 0.04)));
    }
    CHECK(report.per_N[1].chebyshev_bound == doctest::Approx(0.00625));
  }
}

TEST_CASE("walk max deviation") {
  Trajectory t;
  t.jump_times = {0.0, 0.5};
  t.states = {StateVector{0.0}, StateVector{0.1}};
  t.horizon = 1.0;
  // Just before 0.5 the gap is 0.25; at 1 it is 0.4.
  CHECK(walk_max_deviation(t, 0.5) == doctest::Approx(0.4));
}

TEST_CASE("Wilson interval") {
  const auto zero = wilson_interval(0, 100);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi > 0.0);
  CHECK(zero.hi < 0.05);
  const auto all = wilson_interval(100, 100);
  CHECK(all.hi == 1.0);
  CHECK(all.lo > 0.95);
  for (std::uint64_t k = 0; k <= 40; ++k) {
    const auto p = wilson_interval(k, 40);
    CHECK(p.lo <= p.estimate);
    CHECK(p.estimate <= p.hi);
  }
  // Reference value: 10 of 50 gives [0.112438, 0.330371].
  const auto ten = wilson_interval(10, 50);
  CHECK(ten.lo == doctest::Approx(0.1124375001577611).epsilon(1e-12));
  CHECK(ten.hi == doctest::Approx(0.3303710593222542).epsilon(1e-12));
  CHECK_THROWS(wilson_interval(1, 0));
  CHECK_THROWS(wilson_interval(3, 2));
}

TEST_CASE("summary statistics") {
  const std::vector<double> xs{3.0, 1.0, 2.0, 10.0};
  CHECK(median(xs) == 2.5);
  CHECK(mean(xs) == 4.0);
  CHECK(sample_sd(xs) == doctest::Approx(std::sqrt(((1.0) + 9.0 + 4.0 + 36.0) / 3.0)));
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  CHECK(*ls_slope(x, y) == doctest::Approx(2.0));
  CHECK_FALSE(ls_slope(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}).has_value());
  CHECK_THROWS(median(std::vector<double>{}));
}
