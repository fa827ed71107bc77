#ifndef FLUIDLIM_BOUNDS_HPP
#define FLUIDLIM_BOUNDS_HPP

#include <cstdint>
#include <optional>

#include "fluidlim/jump_model.hpp"

namespace fluidlim {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Series for
/// x < a + 1, Lentz continued fraction for the complement otherwise.
double regularized_gamma_p(double a, double x);

/// P[xi_n <= t] for xi_n ~ Gamma(shape n, rate), i.e. P(n, rate * t).
/// Throws std::domain_error for n < 1, rate <= 0 or t < 0.
double gamma_tail_cdf(std::int64_t n, double rate, double t);

/// The polynomial envelope (t C2)^(n-2) / (n-1)! for P[xi_n <= t].
/// Diagnostic only; gamma_tail_cdf is authoritative.
double erlang_polynomial_envelope(std::int64_t n, double c2, double t);

/// Inputs of the martingale maximal inequality: C1 bounds the per-step
/// second moment, C2 the jump rate; delta is the threshold for ||M||^2.
struct BoundInputs {
  double c1 = 0.0;
  double c2 = 1.0;
  double u = 1.0;
  double delta = 1.0;

  void validate() const;
};

struct MaximalBound {
  double raw = 0.0;      // min_n { P[xi_n < u] + n C1 / delta }
  double clamped = 0.0;  // raw clamped to [0, 1]
  std::int64_t argmin_n = 2;
  double gamma_term = 0.0;
  double moment_term = 0.0;
};

/// ceil(10 C2 u) + 10.
std::int64_t default_n_max(const BoundInputs& in);

/// Bound on P[sup_{t<=u} ||M_t||^2 >= delta], minimised over n = 2..n_max.
MaximalBound maximal_inequality_bound(const BoundInputs& in, std::int64_t n_max);
MaximalBound maximal_inequality_bound(const BoundInputs& in);

struct HydrodynamicBound {
  std::int64_t N = 0;
  double u = 0.0;
  double delta = 0.0;
  double kappa = 0.0;
  std::int64_t n = 0;            // ceil(u kappa N)
  double bound = 0.0;            // clamped to [0, 1]
  double bound_raw = 0.0;
  double chebyshev_term = 0.0;   // P[xi_n < u], exact
  double chebyshev_envelope = 0.0;  // Var / (mean - u)^2, clamped to [0, 1]
  double moment_term = 0.0;      // n C1 / delta
};

/// Evaluates the maximal inequality with C1 = kappa3 / N^2, C2 = kappa2 N and
/// n = ceil(u kappa N). Requires kappa > kappa2 and N >= 1.
HydrodynamicBound hydrodynamic_bound(const ScalingAssumptions& assumptions, std::int64_t N, double u,
                                     double delta, double kappa);
/// kappa defaults to 2 kappa2 (or 1 when kappa2 == 0).
HydrodynamicBound hydrodynamic_bound(const ScalingAssumptions& assumptions, std::int64_t N, double u,
                                     double delta);

/// kappa e^{lambda t}.
double gronwall_envelope(double kappa, double lambda, double t);

}  // namespace fluidlim

#endif  // FLUIDLIM_BOUNDS_HPP
