#include "fluidlim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fluidlim/errors.hpp"

namespace fluidlim {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::horizon_reached: return "horizon-reached";
    case Termination::exited_S: return "exited-S";
    case Termination::rate_vanished: return "rate-vanished";
  }
  return "unknown";
}

std::size_t Trajectory::index_at(double t) const {
  if (jump_times.empty()) throw std::logic_error("Trajectory::index_at on empty trajectory");
  if (t < 0.0) throw std::out_of_range("Trajectory::index_at: negative time");
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return static_cast<std::size_t>(it - jump_times.begin()) - 1;
}

void SimConfig::validate() const {
  if (!(horizon_u > 0.0) || !std::isfinite(horizon_u)) {
    throw std::invalid_argument("SimConfig: horizon must be positive and finite");
  }
  if (max_jumps < 1) throw std::invalid_argument("SimConfig: max_jumps must be >= 1");
}

std::uint64_t default_max_jumps(double kappa2, std::int64_t scale, double horizon) {
  return static_cast<std::uint64_t>(std::ceil(4.0 * kappa2 * static_cast<double>(scale) * horizon)) + 1000;
}

Trajectory simulate(const JumpModel& model, const StateVector& x0, const SimConfig& cfg,
                    RngStream& rng) {
  cfg.validate();
  if (x0.dim() != model.dim()) throw std::invalid_argument("simulate: x0 dimension mismatch");
  if (!model.in_D(x0)) throw std::domain_error("simulate: initial state outside D");

  Trajectory traj;
  traj.horizon = cfg.horizon_u;
  traj.jump_times.push_back(0.0);
  traj.states.push_back(x0);

  if (!model.in_S(x0)) {
    traj.exited_S_at = 0;
    if (cfg.stop_on_exit) {
      traj.terminated_reason = Termination::exited_S;
      return traj;
    }
  }

  double t = 0.0;
  StateVector x = x0;
  while (true) {
    const double r = model.rate(x);
    if (!(r > 0.0)) {
      traj.terminated_reason = Termination::rate_vanished;
      break;
    }
    const double next = t + rng.exponential(r);
    if (next > cfg.horizon_u) {
      traj.terminated_reason = Termination::horizon_reached;
      break;
    }
    if (traj.num_jumps() >= cfg.max_jumps) {
      throw InvariantBreach("simulate: exceeded max_jumps (" + std::to_string(cfg.max_jumps) +
                            "); rates are likely mis-scaled");
    }
    StateVector y = model.advance(x, rng);
    if (!y.is_finite() || !model.in_D(y)) {
      throw InvariantBreach("simulate: model stepped outside D");
    }
    t = next;
    x = std::move(y);
    traj.jump_times.push_back(t);
    traj.states.push_back(x);
    if (!traj.exited_S_at && !model.in_S(x)) {
      traj.exited_S_at = traj.states.size() - 1;
      if (cfg.stop_on_exit) {
        traj.terminated_reason = Termination::exited_S;
        break;
      }
    }
  }
  return traj;
}

Trajectory simulate_replicate(const JumpModel& model, const StateVector& x0, const SimConfig& cfg,
                              std::uint64_t replicate) {
  RngStream rng = RngStream::derive(cfg.master_seed, replicate);
  return simulate(model, x0, cfg, rng);
}

std::optional<double> exit_time(const Trajectory& traj) {
  if (!traj.exited_S_at) return std::nullopt;
  return traj.jump_times.at(*traj.exited_S_at);
}

namespace {

std::size_t knot_index(const std::vector<double>& knots, double t) {
  if (knots.empty()) throw std::logic_error("path has no knots");
  if (t < 0.0) throw std::out_of_range("path evaluated at negative time");
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  return static_cast<std::size_t>(it - knots.begin()) - 1;
}

}  // namespace

StateVector CompensatorPath::at(double t) const {
  const std::size_t k = knot_index(knot_times, t);
  return knot_values[k] + (t - knot_times[k]) * slopes[k];
}

StateVector MartingalePath::at(double t) const {
  const std::size_t k = knot_index(knot_times, t);
  return knot_values[k] + (t - knot_times[k]) * slopes[k];
}

double MartingalePath::sup_norm(double u) const {
  double best = 0.0;
  std::size_t k = 0;
  for (; k < knot_times.size() && knot_times[k] <= u; ++k) {
    best = std::max(best, knot_values[k].norm());
    best = std::max(best, left_limits[k].norm());
  }
  return std::max(best, at(u).norm());
}

CompensatorPath compensator_path(const Trajectory& traj, const StateMap& field) {
  if (traj.states.empty()) throw std::invalid_argument("compensator_path: empty trajectory");
  CompensatorPath a;
  a.knot_times = traj.jump_times;
  a.knot_values.reserve(traj.states.size());
  a.slopes.reserve(traj.states.size());
  StateVector acc = traj.states.front();
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    if (n > 0) acc += (traj.jump_times[n] - traj.jump_times[n - 1]) * a.slopes[n - 1];
    a.knot_values.push_back(acc);
    a.slopes.push_back(field(traj.states[n]));
  }
  return a;
}

MartingalePath martingale_path(const Trajectory& traj, const StateMap& field) {
  if (traj.states.empty()) throw std::invalid_argument("martingale_path: empty trajectory");
  MartingalePath m;
  m.knot_times = traj.jump_times;
  const std::size_t n_states = traj.states.size();
  m.knot_values.reserve(n_states);
  m.left_limits.reserve(n_states);
  m.slopes.reserve(n_states);

  const StateVector& x0 = traj.states.front();
  StateVector integral(x0.dim());  // sum_{j<=n} (tau_j - tau_{j-1}) b[X_{j-1}]
  StateVector prev_slope;
  for (std::size_t n = 0; n < n_states; ++n) {
    StateVector b = field(traj.states[n]);
    if (n == 0) {
      m.left_limits.emplace_back(x0.dim());
    } else {
      integral += (traj.jump_times[n] - traj.jump_times[n - 1]) * prev_slope;
      m.left_limits.push_back(traj.states[n - 1] - x0 - integral);
    }
    m.knot_values.push_back(traj.states[n] - x0 - integral);
    m.slopes.push_back(-1.0 * b);
    prev_slope = std::move(b);
  }
  return m;
}

}  // namespace fluidlim
