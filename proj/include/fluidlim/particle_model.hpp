#ifndef FLUIDLIM_PARTICLE_MODEL_HPP
#define FLUIDLIM_PARTICLE_MODEL_HPP

#include <cstdint>
#include <memory>
#include <optional>

#include "fluidlim/fluid_ode.hpp"
#include "fluidlim/jump_model.hpp"

namespace fluidlim {

/// Multitype particle system: B particles, initially B - 1 heavy inert and one
/// heavy excited. Each step replaces a uniformly chosen heavy particle with a
/// light one; every (w - 1)-th inert removal excites another inert particle.
struct ParticleSystemParams {
  std::int64_t w = 2;
  double mu = 1.0;      // mean of B / N
  double sigma2 = 0.0;  // Var B = sigma2 N
  double kappa = 2.0;   // S = {x in D : x0 < kappa}
  std::int64_t N = 100;
  /// Optional extra S constraint x2 < time_cap (rescaled step count), used
  /// to give the fluid path a finite exit time.
  std::optional<double> time_cap;

  void validate() const;
};

/// Exact chain state. Real coordinates (x0, x1, x2) are the views
/// (B_count, inert_removed, step_n) / N.
struct ParticleState {
  std::int64_t B_count = 0;
  std::int64_t inert_removed = 0;
  std::int64_t step_n = 0;

  std::int64_t heavy() const { return B_count - step_n; }
  StateVector coords(std::int64_t N) const;
  /// Snaps each coordinate to the nearest multiple of 1/N.
  static ParticleState from_coords(const StateVector& x, std::int64_t N);

  friend bool operator==(const ParticleState&, const ParticleState&) = default;
};

struct ParticleCounts {
  std::int64_t inert = 0;
  std::int64_t excited = 0;
};

/// Inert/excited counts from the exact counters, including the single
/// initially excited particle. When the last inert particle is removed on an
/// excitation step there is nothing left to excite; that excitation is
/// dropped. Throws InvariantBreach for unreachable states.
ParticleCounts reconstruct_counts(const ParticleState& state, const ParticleSystemParams& params);

/// Counts from the large-N formulas, without the offsets for the initial
/// excited particle.
ParticleCounts large_n_counts(const ParticleState& state, std::int64_t w);

/// Inert fraction of the heavy particles from the large-N formula
/// (x0 - x1 - floor(N x1 / (w - 1)) / N) / (x0 - x2), floor on integers.
double large_n_inert_probability(const StateVector& x, std::int64_t w, std::int64_t N);
/// b_N from the large-N formula: (0, x0 - x1 - floor(N x1/(w-1))/N, x0 - x2).
StateVector large_n_drift(const StateVector& x, std::int64_t w, std::int64_t N);

class ParticleModel final : public JumpModel {
 public:
  ParticleModel(ParticleSystemParams params, std::int64_t B);

  const ParticleSystemParams& params() const { return params_; }
  std::int64_t B() const { return B_; }
  StateVector initial_state() const;

  /// Exact proportion of inert among heavy particles, I_n / H_n. Off the
  /// reachable set the ratio is clamped to [0, 1]; 0 when no heavy particle.
  double inert_probability(const StateVector& x) const;

  std::size_t dim() const override { return 3; }
  std::int64_t scale() const override { return params_.N; }
  double rate(const StateVector& x) const override;
  StateVector sample_increment(const StateVector& x, RngStream& rng) const override;
  StateVector mean_increment(const StateVector& x) const override;
  double second_moment_bound(const StateVector& x) const override;
  bool in_D(const StateVector& x) const override;
  bool in_S(const StateVector& x) const override;
  StateVector advance(const StateVector& x, RngStream& rng) const override;
  std::optional<ColumnExtension> trajectory_columns() const override;

  /// One exact step on the counters. Throws InvariantBreach if the state is
  /// unreachable or has no heavy particle left.
  ParticleState step(const ParticleState& s, RngStream& rng) const;

 private:
  ParticleSystemParams params_;
  std::int64_t B_;
};

/// Membership in D = {x0 >= x1 w/(w-1), x0 >= x2} for arbitrary real x.
bool particle_in_D(const StateVector& x, std::int64_t w);
bool particle_in_S(const StateVector& x, const ParticleSystemParams& params);

struct ParticleInstance {
  std::shared_ptr<const ParticleModel> model;
  StateVector x0;
};

/// Draws B as the multiple of w nearest to a Normal(mu N, sigma2 N) draw,
/// truncated below at w, and builds the chain started at (B/N, 0, 0).
std::int64_t draw_particle_count(const ParticleSystemParams& params, RngStream& rng);
ParticleInstance particle_model(const ParticleSystemParams& params, RngStream& rng);

/// b(x) = (0, x0 - x1 w/(w-1), x0 - x2), with its operator 2-norm as the
/// Lipschitz constant and the analytic solution from (mu, 0, 0).
VectorField particle_limit_field(const ParticleSystemParams& params);

struct ParticleClosedForm {
  double y0 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double h = 0.0;  // heavy / N
  double e = 0.0;  // excited / N
};

ParticleClosedForm particle_closed_form(const ParticleSystemParams& params, double t);

/// Excited and inert fractions written as functions of the heavy fraction h.
double excited_from_heavy(double h, double mu, std::int64_t w);
double inert_from_heavy(double h, double mu, std::int64_t w);

/// kappa2 = kappa, kappa3 = 3, a = (mu, 0, 0), kappa1(delta) = (sigma2 + w^2) / delta^2.
ScalingAssumptions particle_assumptions(const ParticleSystemParams& params);

}  // namespace fluidlim

#endif  // FLUIDLIM_PARTICLE_MODEL_HPP
