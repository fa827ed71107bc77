#ifndef FLUIDLIM_JUMP_MODEL_HPP
#define FLUIDLIM_JUMP_MODEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fluidlim/rng.hpp"
#include "fluidlim/state_vector.hpp"

namespace fluidlim {

using StatePredicate = std::function<bool(const StateVector&)>;
using StateMap = std::function<StateVector(const StateVector&)>;

/// Extra per-state columns a model contributes to CSV output.
struct ColumnExtension {
  std::vector<std::string> names;
  std::function<std::vector<double>(const StateVector&)> values;
};

/// A scaled pure-jump chain: a discrete chain whose steps are clocked by a
/// state-dependent exponential rate. Implementations are immutable after
/// construction and may be shared read-only between threads.
///
/// D is the closed domain every reachable state lives in; S is the relatively
/// open region where the scaling bounds hold. in_S(x) must imply in_D(x).
class JumpModel {
 public:
  virtual ~JumpModel() = default;

  virtual std::size_t dim() const = 0;
  virtual std::int64_t scale() const = 0;

  /// Events per unit time in state x (c_N[x]).
  virtual double rate(const StateVector& x) const = 0;
  /// One chain step X_{n+1} - X_n drawn from the model's increment law.
  virtual StateVector sample_increment(const StateVector& x, RngStream& rng) const = 0;
  virtual StateVector mean_increment(const StateVector& x) const = 0;
  /// Trace of the increment covariance plus squared norm of its mean.
  virtual double second_moment_bound(const StateVector& x) const = 0;
  virtual bool in_D(const StateVector& x) const = 0;
  virtual bool in_S(const StateVector& x) const = 0;

  /// Next chain state. Models with exact internal bookkeeping override this
  /// to avoid accumulating floating-point error in x + increment.
  virtual StateVector advance(const StateVector& x, RngStream& rng) const {
    return x + sample_increment(x, rng);
  }

  virtual std::optional<ColumnExtension> trajectory_columns() const { return std::nullopt; }
};

/// b_N[x] = c_N[x] mu_N[x]. Throws std::domain_error when x is outside D.
StateVector drift(const JumpModel& model, const StateVector& x);

/// Constants of the hydrodynamic scaling: the rate is at most kappa2 N on S
/// and the increment second moment at most kappa3 / N^2.
struct ScalingAssumptions {
  std::function<double(double)> kappa1;  // initial-condition tail constant, as a function of delta
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  StateVector limit_point;
};

struct ScalingViolation {
  std::size_t probe_index = 0;
  double rate_ratio = 0.0;
  double moment_ratio = 0.0;
};

struct ScalingReport {
  double max_rate_ratio = 0.0;
  double max_moment_ratio = 0.0;
  std::vector<ScalingViolation> violations;

  bool holds() const { return violations.empty(); }
};

/// Worst-case ratios rate(x)/(kappa2 N) and second_moment_bound(x)/(kappa3 N^-2)
/// over the probes. Probes breaking either bound are listed, not thrown.
/// Throws std::invalid_argument on empty probes or probes outside S.
ScalingReport validate_scaling(const JumpModel& model, const ScalingAssumptions& assumptions,
                               const std::vector<StateVector>& probes);

/// Uniform lattice over the box [lo, hi] with points_per_axis points on each
/// axis, keeping only points accepted by keep.
std::vector<StateVector> lattice_grid(const StateVector& lo, const StateVector& hi,
                                      std::size_t points_per_axis, const StatePredicate& keep);

}  // namespace fluidlim

#endif  // FLUIDLIM_JUMP_MODEL_HPP
