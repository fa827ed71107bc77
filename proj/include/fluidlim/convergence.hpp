#ifndef FLUIDLIM_CONVERGENCE_HPP
#define FLUIDLIM_CONVERGENCE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fluidlim/fluid_ode.hpp"
#include "fluidlim/jump_model.hpp"
#include "fluidlim/particle_model.hpp"
#include "fluidlim/random_walk.hpp"
#include "fluidlim/simulator.hpp"
#include "fluidlim/stats.hpp"

namespace fluidlim {

struct ModelInstance {
  std::shared_ptr<const JumpModel> model;
  StateVector x0;
};

/// A sequence of models indexed by N sharing one fluid limit.
struct ModelFamily {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  /// Builds the N-th model; may draw from rng (e.g. a random initial size).
  std::function<ModelInstance(std::int64_t N, RngStream& rng)> make;
  VectorField field;
  StateVector limit_point;
  StatePredicate in_S;
  double kappa2 = 1.0;
  /// Derived columns for fluid CSV output.
  std::optional<ColumnExtension> fluid_columns;
};

ModelFamily particle_family(const ParticleSystemParams& params);
ModelFamily walk_family(double mu, double sigma2, const IncrementSampler& sampler);

struct DeviationSample {
  std::int64_t N = 0;
  std::uint64_t replicate = 0;
  double sup_dev = 0.0;
  std::optional<double> sigma_N;
  bool exited = false;
};

/// sup_{t<=u} ||Y_{t ^ sigma_N} - y[t ^ sigma_N]||, evaluated on every jump
/// time (both one-sided values), every ODE grid point and the stopping time
/// itself. u must not exceed sol.end_time().
double sup_deviation(const Trajectory& traj, const FluidSolution& sol, double u);
/// Same without stopping at sigma_N; needs a trajectory simulated past exit.
double sup_deviation_unstopped(const Trajectory& traj, const FluidSolution& sol, double u);

struct LadderConfig {
  double u = 1.0;
  double delta = 0.05;
  std::uint64_t master_seed = 0;
  std::size_t replicates = 500;
  std::vector<std::int64_t> N_ladder;
  double ode_step = kDefaultOdeStep;
  bool keep_samples = false;
};

struct PerNSummary {
  std::int64_t N = 0;
  double median_sup_dev = 0.0;
  double mean_sup_dev = 0.0;
  Proportion exceedance;
  double exit_prob = 0.0;
  std::optional<double> median_sigma;
};

struct ConvergenceReport {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  double u = 0.0;
  double delta = 0.0;
  std::uint64_t master_seed = 0;
  std::size_t replicates = 0;
  std::vector<std::int64_t> N_ladder;
  std::vector<PerNSummary> per_N;
  std::optional<double> slope_median_dev;
  std::optional<double> slope_exceedance;
  std::optional<double> zeta;
  double fluid_horizon = 0.0;
  std::vector<DeviationSample> samples;  // filled when keep_samples
};

/// Throws std::invalid_argument for a non-increasing ladder, fewer than 100
/// replicates, or u beyond the fluid exit time.
ConvergenceReport run_ladder(const ModelFamily& family, const LadderConfig& cfg);

struct ExitPerN {
  std::int64_t N = 0;
  Proportion far_from_zeta;  // P[|sigma_N - zeta| > delta]
  std::optional<double> median_sigma;
  double exited_fraction = 0.0;
};

struct ExitReport {
  std::string model;
  double zeta = 0.0;
  double delta = 0.0;
  double horizon = 0.0;
  std::vector<ExitPerN> per_N;
};

/// Simulates to max(cfg.u, zeta + delta); paths still inside S at that
/// horizon count as |sigma_N - zeta| > delta. Throws if the fluid path never
/// leaves S.
ExitReport exit_time_convergence(const ModelFamily& family, const LadderConfig& cfg);

enum class WalkClock {
  poisson,  // rate-N exponential clock
  lattice   // steps exactly at t = n/N
};

struct WllnPerN {
  std::int64_t N = 0;
  Proportion exceedance;  // P[max_{t<=1} |Y_t - t mu| >= delta]
  double chebyshev_bound = 0.0;  // sigma2 / (N delta^2)
  double poisson_bound = 0.0;    // (sigma2 + mu^2) / (N delta^2)
  bool dominated = false;        // exceedance <= chebyshev_bound + 3 half-widths
};

struct WllnReport {
  double mu = 0.0;
  double sigma2 = 0.0;
  double delta = 0.0;
  WalkClock clock = WalkClock::poisson;
  std::vector<WllnPerN> per_N;
};

/// max_{t<=1} |Y_t - t mu| for a unit-horizon walk path.
double walk_max_deviation(const Trajectory& traj, double mu);

WllnReport wlln_check(const IncrementSampler& sampler, const LadderConfig& cfg,
                      WalkClock clock = WalkClock::poisson);

}  // namespace fluidlim

#endif  // FLUIDLIM_CONVERGENCE_HPP
