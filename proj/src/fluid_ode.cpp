#include "fluidlim/fluid_ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fluidlim {

namespace {

StateVector checked_eval(const VectorField& field, const StateVector& y) {
  StateVector v;
  try {
    v = field.b(y);
  } catch (const std::invalid_argument& e) {
    // StateVector refuses NaN/Inf, so a non-finite drift surfaces here.
    throw std::domain_error(std::string("vector field evaluation failed: ") + e.what());
  }
  if (v.dim() != y.dim()) throw std::invalid_argument("vector field returned wrong dimension");
  if (!v.is_finite()) throw std::domain_error("vector field evaluated to a non-finite value");
  return v;
}

StateVector rk4_step(const VectorField& field, const StateVector& y, const StateVector& k1, double h) {
  const StateVector k2 = checked_eval(field, y + (0.5 * h) * k1);
  const StateVector k3 = checked_eval(field, y + (0.5 * h) * k2);
  const StateVector k4 = checked_eval(field, y + h * k3);
  StateVector out = y;
  out += (h / 6.0) * k1;
  out += (h / 3.0) * k2;
  out += (h / 3.0) * k3;
  out += (h / 6.0) * k4;
  return out;
}

StateVector hermite(double t0, const StateVector& y0, const StateVector& f0, double t1,
                    const StateVector& y1, const StateVector& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  StateVector out(y0.dim());
  for (std::size_t i = 0; i < y0.dim(); ++i) {
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  }
  return out;
}

StateVector interpolate_segment(const FluidSolution& sol, std::size_t k, double t) {
  if (t == sol.grid_times[k]) return sol.grid_states[k];
  return hermite(sol.grid_times[k], sol.grid_states[k], sol.grid_derivs[k], sol.grid_times[k + 1],
                 sol.grid_states[k + 1], sol.grid_derivs[k + 1], t);
}

// in_S holds at the left end of segment k and fails at its right end.
double bisect_segment(const FluidSolution& sol, std::size_t k, const StatePredicate& in_S, double tol) {
  double lo = sol.grid_times[k];
  double hi = sol.grid_times[k + 1];
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (in_S(interpolate_segment(sol, k, mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FluidSolution integrate(const VectorField& field, const StateVector& a, double horizon, double step,
                        const StatePredicate& in_S, double exit_tol) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("integrate: step must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("integrate: horizon must be finite and >= 0");
  }
  if (!(exit_tol > 0.0)) throw std::invalid_argument("integrate: exit tolerance must be positive");
  if (field.dim != 0 && field.dim != a.dim()) throw std::invalid_argument("integrate: dimension mismatch");

  FluidSolution sol;
  sol.horizon = horizon;
  sol.grid_times.push_back(0.0);
  sol.grid_states.push_back(a);
  sol.grid_derivs.push_back(checked_eval(field, a));

  if (in_S && !in_S(a)) {
    sol.zeta = 0.0;
    return sol;
  }

  // Number of full steps; snap to an integer count when horizon/step is one
  // up to rounding so the grid lands exactly on the horizon.
  const double ratio = horizon / step;
  const double nearest = std::round(ratio);
  const bool exact = std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest);
  const auto full_steps = static_cast<std::size_t>(exact ? nearest : std::floor(ratio));
  const std::size_t total_steps = full_steps + (exact ? 0 : 1);

  for (std::size_t k = 1; k <= total_steps; ++k) {
    const double t_prev = sol.grid_times.back();
    const double t_next = (k == total_steps) ? horizon : static_cast<double>(k) * step;
    StateVector y = rk4_step(field, sol.grid_states.back(), sol.grid_derivs.back(), t_next - t_prev);
    if (!y.is_finite()) throw std::domain_error("integrate: solution became non-finite");
    StateVector f = checked_eval(field, y);
    sol.grid_times.push_back(t_next);
    sol.grid_states.push_back(std::move(y));
    sol.grid_derivs.push_back(std::move(f));
    if (in_S && !in_S(sol.grid_states.back())) {
      sol.zeta = bisect_segment(sol, sol.grid_times.size() - 2, in_S, exit_tol);
      break;
    }
  }
  return sol;
}

std::optional<double> detect_exit(const FluidSolution& sol, const StatePredicate& in_S, double tol) {
  if (sol.grid_states.empty()) return std::nullopt;
  if (!in_S(sol.grid_states.front())) return 0.0;
  for (std::size_t k = 1; k < sol.grid_states.size(); ++k) {
    if (!in_S(sol.grid_states[k])) return bisect_segment(sol, k - 1, in_S, tol);
  }
  return std::nullopt;
}

StateVector eval_solution(const FluidSolution& sol, double t) {
  if (sol.grid_times.empty()) throw std::logic_error("eval_solution: empty solution");
  // Tolerate rounding in callers that compute t as min(u, zeta).
  const double end = sol.end_time();
  if (!(t >= 0.0) || t > end + 1e-12 * std::max(1.0, end)) {
    throw std::out_of_range("eval_solution: time outside [0, end_time]");
  }
  auto it = std::upper_bound(sol.grid_times.begin(), sol.grid_times.end(), t);
  std::size_t k = static_cast<std::size_t>(it - sol.grid_times.begin()) - 1;
  if (k + 1 >= sol.grid_times.size()) return sol.grid_states.back();
  return interpolate_segment(sol, k, t);
}

VectorField extend_with_time(const VectorField& field) {
  VectorField out;
  out.dim = field.dim + 1;
  out.lipschitz_lambda = field.lipschitz_lambda;
  const std::size_t d = field.dim;
  out.b = [inner = field.b, d](const StateVector& x) {
    std::vector<double> head(x.coords().begin(), x.coords().begin() + static_cast<std::ptrdiff_t>(d));
    StateVector v = inner(StateVector(std::move(head)));
    std::vector<double> full(v.coords().begin(), v.coords().end());
    full.push_back(1.0);
    return StateVector(std::move(full));
  };
  if (field.closed_form) {
    out.closed_form = [inner = field.closed_form](double t) {
      StateVector v = inner(t);
      std::vector<double> full(v.coords().begin(), v.coords().end());
      full.push_back(t);
      return StateVector(std::move(full));
    };
  }
  return out;
}

}  // namespace fluidlim
