#ifndef FLUIDLIM_SIMULATOR_HPP
#define FLUIDLIM_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fluidlim/jump_model.hpp"
#include "fluidlim/rng.hpp"
#include "fluidlim/state_vector.hpp"

namespace fluidlim {

enum class Termination { horizon_reached, exited_S, rate_vanished };

const char* to_string(Termination t);

/// A realised path of Y_t = X_{nu[t]}: piecewise constant, right
/// continuous, with states[n] held on [jump_times[n], jump_times[n+1]).
struct Trajectory {
  std::vector<double> jump_times;  // jump_times[0] == 0
  std::vector<StateVector> states;
  double horizon = 0.0;
  std::optional<std::size_t> exited_S_at;
  Termination terminated_reason = Termination::horizon_reached;

  std::size_t num_jumps() const { return states.empty() ? 0 : states.size() - 1; }
  std::size_t dim() const { return states.empty() ? 0 : states.front().dim(); }
  /// Index n with jump_times[n] <= t < jump_times[n+1].
  std::size_t index_at(double t) const;
  const StateVector& state_at(double t) const { return states[index_at(t)]; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct SimConfig {
  double horizon_u = 1.0;
  std::uint64_t master_seed = 0;
  bool stop_on_exit = false;
  std::uint64_t max_jumps = 1'000'000;

  void validate() const;
};

/// ceil(4 kappa2 N horizon) + 1000: comfortably above the Poisson-dominated
/// jump count of a correctly scaled model.
std::uint64_t default_max_jumps(double kappa2, std::int64_t scale, double horizon);

/// Simulates one trajectory. Inter-event times are Exponential(rate(X_n))
/// by inverse CDF. Stops at the horizon, when the rate is <= 0, or at the
/// first state outside S when cfg.stop_on_exit is set.
///
/// Throws std::domain_error if x0 is outside D, InvariantBreach if the model
/// steps outside D or the jump count exceeds cfg.max_jumps.
Trajectory simulate(const JumpModel& model, const StateVector& x0, const SimConfig& cfg,
                    RngStream& rng);

/// Uses the stream derived from (cfg.master_seed, replicate).
Trajectory simulate_replicate(const JumpModel& model, const StateVector& x0, const SimConfig& cfg,
                              std::uint64_t replicate);

/// sigma_N: the first jump time at which the path is outside S. Exit can only
/// happen at a jump, so this is exact.
std::optional<double> exit_time(const Trajectory& traj);

/// A_t = Y_0 + int_0^t field(Y_{s-}) ds for a piecewise-constant Y. Linear
/// between jump times; extends linearly past the last jump.
struct CompensatorPath {
  std::vector<double> knot_times;
  std::vector<StateVector> knot_values;  // A at each jump time
  std::vector<StateVector> slopes;       // field(X_n) on [tau_n, tau_{n+1})

  StateVector at(double t) const;
};

/// M_t = Y_t - A_t. Stored as its values at jump times (built from the
/// telescoped jump sums, not by subtracting A) plus the slopes -field(X_n).
struct MartingalePath {
  std::vector<double> knot_times;
  std::vector<StateVector> knot_values;  // M_{tau_n}
  std::vector<StateVector> left_limits;  // M_{tau_n -}; left_limits[0] == 0
  std::vector<StateVector> slopes;

  StateVector at(double t) const;
  /// sup_{t <= u} ||M_t||, evaluated exactly on the jump times (both sides)
  /// and at u; M is affine in between so nothing else can be larger.
  double sup_norm(double u) const;
};

CompensatorPath compensator_path(const Trajectory& traj, const StateMap& field);
MartingalePath martingale_path(const Trajectory& traj, const StateMap& field);

}  // namespace fluidlim

#endif  // FLUIDLIM_SIMULATOR_HPP
