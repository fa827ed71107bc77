#include "fluidlim/particle_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fluidlim/errors.hpp"

namespace fluidlim {

namespace {

constexpr double kDomainSlack = 1e-12;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void ParticleSystemParams::validate() const {
  if (w < 2) throw std::invalid_argument("particle model: w must be an integer >= 2");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("particle model: mu must be positive");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("particle model: sigma2 must be >= 0");
  if (!(kappa > mu) || !std::isfinite(kappa)) throw std::invalid_argument("particle model: kappa must exceed mu");
  if (N < 1) throw std::invalid_argument("particle model: N must be >= 1");
  if (time_cap && !(*time_cap > 0.0)) throw std::invalid_argument("particle model: time cap must be positive");
}

StateVector ParticleState::coords(std::int64_t N) const {
  const double n = static_cast<double>(N);
  return StateVector{static_cast<double>(B_count) / n, static_cast<double>(inert_removed) / n,
                     static_cast<double>(step_n) / n};
}

ParticleState ParticleState::from_coords(const StateVector& x, std::int64_t N) {
  if (x.dim() != 3) throw std::invalid_argument("particle state needs 3 coordinates");
  const double n = static_cast<double>(N);
  return ParticleState{std::llround(x[0] * n), std::llround(x[1] * n), std::llround(x[2] * n)};
}

ParticleCounts reconstruct_counts(const ParticleState& s, const ParticleSystemParams& params) {
  const std::int64_t w1 = params.w - 1;
  if (s.B_count < 1 || s.inert_removed < 0 || s.step_n < s.inert_removed || s.heavy() < 0) {
    throw InvariantBreach("reconstruct_counts: counters out of range");
  }
  std::int64_t excitations = s.inert_removed / w1;
  std::int64_t inert = (s.B_count - 1) - s.inert_removed - excitations;
  if (inert == -1 && s.inert_removed > 0 && s.inert_removed % w1 == 0) {
    // The last inert particle went on an excitation step: nothing to excite.
    --excitations;
    inert = 0;
  }
  const std::int64_t excited = 1 + s.inert_removed - s.step_n + excitations;
  if (inert < 0 || excited < 0) {
    throw InvariantBreach("reconstruct_counts: negative count (inert=" + std::to_string(inert) +
                          ", excited=" + std::to_string(excited) + ")");
  }
  if (inert + excited != s.heavy()) throw InvariantBreach("reconstruct_counts: heavy count not conserved");
  return {inert, excited};
}

ParticleCounts large_n_counts(const ParticleState& s, std::int64_t w) {
  const std::int64_t f = floor_div(s.inert_removed, w - 1);
  return {s.B_count - s.inert_removed - f, s.inert_removed - s.step_n + f};
}

double large_n_inert_probability(const StateVector& x, std::int64_t w, std::int64_t N) {
  const ParticleState s = ParticleState::from_coords(x, N);
  const std::int64_t num = s.B_count - s.inert_removed - floor_div(s.inert_removed, w - 1);
  const std::int64_t den = s.heavy();
  if (den <= 0) throw std::domain_error("large_n_inert_probability: no heavy particles");
  return static_cast<double>(num) / static_cast<double>(den);
}

StateVector large_n_drift(const StateVector& x, std::int64_t w, std::int64_t N) {
  const ParticleState s = ParticleState::from_coords(x, N);
  const double n = static_cast<double>(N);
  const double f = static_cast<double>(floor_div(s.inert_removed, w - 1)) / n;
  return StateVector{0.0, x[0] - x[1] - f, x[0] - x[2]};
}

bool particle_in_D(const StateVector& x, std::int64_t w) {
  if (x.dim() != 3) return false;
  const double slack = kDomainSlack * std::max(1.0, std::abs(x[0]));
  const double wd = static_cast<double>(w);
  return x[0] * (wd - 1.0) - x[1] * wd >= -slack * wd && x[0] - x[2] >= -slack;
}

bool particle_in_S(const StateVector& x, const ParticleSystemParams& params) {
  if (!particle_in_D(x, params.w) || !(x[0] < params.kappa)) return false;
  return !params.time_cap || x[2] < *params.time_cap;
}

ParticleModel::ParticleModel(ParticleSystemParams params, std::int64_t B)
    : params_(std::move(params)), B_(B) {
  params_.validate();
  if (B_ < params_.w || B_ % params_.w != 0) {
    throw std::invalid_argument("particle model: B must be a positive multiple of w");
  }
}

StateVector ParticleModel::initial_state() const { return ParticleState{B_, 0, 0}.coords(params_.N); }

double ParticleModel::inert_probability(const StateVector& x) const {
  const ParticleState s = ParticleState::from_coords(x, params_.N);
  const std::int64_t heavy = s.heavy();
  if (heavy <= 0) return 0.0;
  const std::int64_t w1 = params_.w - 1;
  std::int64_t inert = (s.B_count - 1) - s.inert_removed - s.inert_removed / w1;
  inert = std::clamp<std::int64_t>(inert, 0, heavy);
  return static_cast<double>(inert) / static_cast<double>(heavy);
}

double ParticleModel::rate(const StateVector& x) const {
  const ParticleState s = ParticleState::from_coords(x, params_.N);
  return static_cast<double>(std::max<std::int64_t>(s.heavy(), 0));
}

StateVector ParticleModel::sample_increment(const StateVector& x, RngStream& rng) const {
  const ParticleState s = ParticleState::from_coords(x, params_.N);
  const ParticleState next = step(s, rng);
  const double n = static_cast<double>(params_.N);
  return StateVector{0.0, static_cast<double>(next.inert_removed - s.inert_removed) / n, 1.0 / n};
}

StateVector ParticleModel::mean_increment(const StateVector& x) const {
  const ParticleState s = ParticleState::from_coords(x, params_.N);
  if (s.heavy() <= 0) return StateVector(3);
  const double n = static_cast<double>(params_.N);
  return StateVector{0.0, inert_probability(x) / n, 1.0 / n};
}

double ParticleModel::second_moment_bound(const StateVector& x) const {
  const double n = static_cast<double>(params_.N);
  const double p = inert_probability(x);
  // p(1-p) + p^2 + 1
  return (p * (1.0 - p) + p * p + 1.0) / (n * n);
}

bool ParticleModel::in_D(const StateVector& x) const { return particle_in_D(x, params_.w); }

bool ParticleModel::in_S(const StateVector& x) const { return particle_in_S(x, params_); }

ParticleState ParticleModel::step(const ParticleState& s, RngStream& rng) const {
  const ParticleCounts c = reconstruct_counts(s, params_);
  const std::int64_t heavy = s.heavy();
  if (heavy <= 0) throw InvariantBreach("particle step with no heavy particles");
  // p_n = inert / heavy, drawn exactly as a uniform index among the heavy.
  const bool inert_removed = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(heavy))) < c.inert;
  return ParticleState{s.B_count, s.inert_removed + (inert_removed ? 1 : 0), s.step_n + 1};
}

StateVector ParticleModel::advance(const StateVector& x, RngStream& rng) const {
  return step(ParticleState::from_coords(x, params_.N), rng).coords(params_.N);
}

std::optional<ColumnExtension> ParticleModel::trajectory_columns() const {
  ColumnExtension ext;
  ext.names = {"heavy", "inert", "excited", "h", "e"};
  ext.values = [params = params_](const StateVector& x) {
    const ParticleState s = ParticleState::from_coords(x, params.N);
    const ParticleCounts c = reconstruct_counts(s, params);
    const double n = static_cast<double>(params.N);
    return std::vector<double>{static_cast<double>(s.heavy()), static_cast<double>(c.inert),
                               static_cast<double>(c.excited), static_cast<double>(s.heavy()) / n,
                               static_cast<double>(c.excited) / n};
  };
  return ext;
}

std::int64_t draw_particle_count(const ParticleSystemParams& params, RngStream& rng) {
  params.validate();
  const double n = static_cast<double>(params.N);
  double target = params.mu * n;
  if (params.sigma2 > 0.0) target += std::sqrt(params.sigma2 * n) * rng.normal();
  const auto w = static_cast<double>(params.w);
  const auto B = static_cast<std::int64_t>(std::llround(target / w)) * params.w;
  return std::max(B, params.w);
}

ParticleInstance particle_model(const ParticleSystemParams& params, RngStream& rng) {
  auto model = std::make_shared<const ParticleModel>(params, draw_particle_count(params, rng));
  StateVector x0 = model->initial_state();
  return {std::move(model), std::move(x0)};
}

VectorField particle_limit_field(const ParticleSystemParams& params) {
  params.validate();
  const double ratio = static_cast<double>(params.w) / static_cast<double>(params.w - 1);
  VectorField f;
  f.dim = 3;
  f.b = [ratio](const StateVector& x) {
    return StateVector{0.0, x[0] - x[1] * ratio, x[0] - x[2]};
  };
  Eigen::Matrix3d a;
  a << 0.0, 0.0, 0.0,
       1.0, -ratio, 0.0,
       1.0, 0.0, -1.0;
  f.lipschitz_lambda = Eigen::JacobiSVD<Eigen::Matrix3d>(a).singularValues()(0);
  f.closed_form = [params](double t) {
    const ParticleClosedForm c = particle_closed_form(params, t);
    return StateVector{c.y0, c.y1, c.y2};
  };
  return f;
}

ParticleClosedForm particle_closed_form(const ParticleSystemParams& params, double t) {
  if (t < 0.0) throw std::invalid_argument("particle_closed_form: t must be >= 0");
  const double w = static_cast<double>(params.w);
  const double mu = params.mu;
  const double fast = std::exp(-t * w / (w - 1.0));
  const double slow = std::exp(-t);
  ParticleClosedForm c;
  c.y0 = mu;
  c.y1 = (w - 1.0) / w * mu * (1.0 - fast);
  c.y2 = mu * (1.0 - slow);
  c.h = mu * slow;
  c.e = mu * (slow - fast);
  return c;
}

double inert_from_heavy(double h, double mu, std::int64_t w) {
  const double wd = static_cast<double>(w);
  return mu * std::pow(h / mu, wd / (wd - 1.0));
}

double excited_from_heavy(double h, double mu, std::int64_t w) { return h - inert_from_heavy(h, mu, w); }

ScalingAssumptions particle_assumptions(const ParticleSystemParams& params) {
  params.validate();
  ScalingAssumptions a;
  const double w2 = static_cast<double>(params.w * params.w);
  a.kappa1 = [s2 = params.sigma2, w2](double delta) { return (s2 + w2) / (delta * delta); };
  a.kappa2 = params.kappa;
  a.kappa3 = 3.0;
  a.limit_point = StateVector{params.mu, 0.0, 0.0};
  return a;
}

}  // namespace fluidlim
