#ifndef FLUIDLIM_FLUID_ODE_HPP
#define FLUIDLIM_FLUID_ODE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "fluidlim/jump_model.hpp"
#include "fluidlim/state_vector.hpp"

namespace fluidlim {

inline constexpr double kDefaultOdeStep = 1e-3;
inline constexpr double kDefaultExitTol = 1e-10;

/// Limiting drift b of a model family, with optional Lipschitz constant and
/// analytic solution t -> y[t] (for the family's own initial point).
struct VectorField {
  std::size_t dim = 0;
  StateMap b;
  std::optional<double> lipschitz_lambda;
  std::function<StateVector(double)> closed_form;
};

/// Dense solution of y' = b(y), y(0) = a, on [0, end_time()].
/// Between grid points the solution is the cubic Hermite interpolant built
/// from the stored states and derivatives.
struct FluidSolution {
  std::vector<double> grid_times;
  std::vector<StateVector> grid_states;
  std::vector<StateVector> grid_derivs;
  double horizon = 0.0;
  /// First exit from S; absent means no exit up to the horizon.
  std::optional<double> zeta;

  double end_time() const { return zeta ? std::min(*zeta, horizon) : horizon; }
  std::size_t dim() const { return grid_states.empty() ? 0 : grid_states.front().dim(); }
};

/// Classical fixed-step RK4. The last step is shortened to land on the
/// horizon. When in_S fails at a grid point the exit time is localised by
/// bisection on the interpolant and integration stops.
///
/// Throws std::invalid_argument for step <= 0 or negative horizon and
/// std::domain_error when b returns non-finite values.
FluidSolution integrate(const VectorField& field, const StateVector& a, double horizon,
                        double step = kDefaultOdeStep, const StatePredicate& in_S = {},
                        double exit_tol = kDefaultExitTol);

/// First grid point outside S, refined by bisection to within tol. Returns 0
/// when the initial state is already outside S.
std::optional<double> detect_exit(const FluidSolution& sol, const StatePredicate& in_S,
                                  double tol = kDefaultExitTol);

/// y[t] for 0 <= t <= sol.end_time(); std::out_of_range otherwise.
StateVector eval_solution(const FluidSolution& sol, double t);

/// Appends time as a last coordinate with unit drift.
VectorField extend_with_time(const VectorField& field);

}  // namespace fluidlim

#endif  // FLUIDLIM_FLUID_ODE_HPP
