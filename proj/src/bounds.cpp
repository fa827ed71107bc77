#include "fluidlim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fluidlim {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr long kMaxIter = 10'000'000;

// log(x^a e^{-x} / Gamma(a)), arranged to avoid cancellation when a is large.
double log_gamma_prefactor(double a, double x) {
  if (a < 10.0) return a * std::log(x) - x - std::lgamma(a);
  const double d = (x - a) / a;
  const double ia = 1.0 / a;
  const double ia2 = ia * ia;
  // Stirling remainder lgamma(a) - [(a - 1/2) ln a - a + ln(2 pi)/2].
  const double stirlerr = ia * (1.0 / 12.0 - ia2 * (1.0 / 360.0 - ia2 * (1.0 / 1260.0 - ia2 / 1680.0)));
  return a * (std::log1p(d) - d) + 0.5 * std::log(a) - 0.5 * std::log(2.0 * std::numbers::pi) - stirlerr;
}

double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (long i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(log_gamma_prefactor(a, x));
    }
  }
  throw std::runtime_error("regularized_gamma_p: series did not converge");
}

double upper_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (long i = 1; i < kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h * std::exp(log_gamma_prefactor(a, x));
  }
  throw std::runtime_error("regularized_gamma_p: continued fraction did not converge");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("regularized_gamma_p: a must be positive");
  if (!(x >= 0.0)) throw std::domain_error("regularized_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::min(1.0, lower_series(a, x));
  return std::clamp(1.0 - upper_continued_fraction(a, x), 0.0, 1.0);
}

double gamma_tail_cdf(std::int64_t n, double rate, double t) {
  if (n < 1) throw std::domain_error("gamma_tail_cdf: n must be >= 1");
  if (!(rate > 0.0)) throw std::domain_error("gamma_tail_cdf: rate must be positive");
  if (!(t >= 0.0)) throw std::domain_error("gamma_tail_cdf: t must be >= 0");
  return regularized_gamma_p(static_cast<double>(n), rate * t);
}

double erlang_polynomial_envelope(std::int64_t n, double c2, double t) {
  if (n < 2) throw std::domain_error("erlang_polynomial_envelope: n must be > 1");
  const double x = t * c2;
  if (n == 2) return 1.0;
  if (x == 0.0) return 0.0;
  return std::exp(static_cast<double>(n - 2) * std::log(x) - std::lgamma(static_cast<double>(n)));
}

void BoundInputs::validate() const {
  if (!std::isfinite(c1) || c1 < 0.0) throw std::invalid_argument("BoundInputs: C1 must be finite and >= 0");
  if (!std::isfinite(c2) || !(c2 > 0.0)) throw std::invalid_argument("BoundInputs: C2 must be positive");
  if (!std::isfinite(u) || !(u > 0.0)) throw std::invalid_argument("BoundInputs: u must be positive");
  if (!std::isfinite(delta) || !(delta > 0.0)) throw std::invalid_argument("BoundInputs: delta must be positive");
}

std::int64_t default_n_max(const BoundInputs& in) {
  return static_cast<std::int64_t>(std::ceil(10.0 * in.c2 * in.u)) + 10;
}

MaximalBound maximal_inequality_bound(const BoundInputs& in, std::int64_t n_max) {
  in.validate();
  if (n_max < 2) throw std::invalid_argument("maximal_inequality_bound: n_max must be >= 2");
  MaximalBound best;
  best.raw = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const double g = gamma_tail_cdf(n, in.c2, in.u);
    const double m = static_cast<double>(n) * in.c1 / in.delta;
    if (g + m < best.raw) {
      best.raw = g + m;
      best.argmin_n = n;
      best.gamma_term = g;
      best.moment_term = m;
    }
    // The moment term only grows; once it alone exceeds the best, stop.
    if (m >= best.raw) break;
  }
  best.clamped = std::clamp(best.raw, 0.0, 1.0);
  return best;
}

MaximalBound maximal_inequality_bound(const BoundInputs& in) {
  return maximal_inequality_bound(in, default_n_max(in));
}

HydrodynamicBound hydrodynamic_bound(const ScalingAssumptions& assumptions, std::int64_t N, double u,
                                     double delta, double kappa) {
  if (N < 1) throw std::invalid_argument("hydrodynamic_bound: N must be >= 1");
  if (!(kappa > assumptions.kappa2)) throw std::invalid_argument("hydrodynamic_bound: kappa must exceed kappa2");
  if (!(u > 0.0) || !(delta > 0.0)) throw std::invalid_argument("hydrodynamic_bound: u and delta must be positive");
  if (!(assumptions.kappa3 >= 0.0)) throw std::invalid_argument("hydrodynamic_bound: kappa3 must be >= 0");

  const double n_real = static_cast<double>(N);
  HydrodynamicBound out;
  out.N = N;
  out.u = u;
  out.delta = delta;
  out.kappa = kappa;
  out.n = static_cast<std::int64_t>(std::ceil(u * kappa * n_real));
  const double c1 = assumptions.kappa3 / (n_real * n_real);
  const double c2 = assumptions.kappa2 * n_real;
  out.moment_term = static_cast<double>(out.n) * c1 / delta;
  if (c2 > 0.0) {
    out.chebyshev_term = gamma_tail_cdf(out.n, c2, u);
    const double mean = static_cast<double>(out.n) / c2;
    const double var = static_cast<double>(out.n) / (c2 * c2);
    out.chebyshev_envelope = std::min(1.0, var / ((mean - u) * (mean - u)));
  }
  out.bound_raw = out.chebyshev_term + out.moment_term;
  out.bound = std::clamp(out.bound_raw, 0.0, 1.0);
  return out;
}

HydrodynamicBound hydrodynamic_bound(const ScalingAssumptions& assumptions, std::int64_t N, double u,
                                     double delta) {
  const double kappa = assumptions.kappa2 > 0.0 ? 2.0 * assumptions.kappa2 : 1.0;
  return hydrodynamic_bound(assumptions, N, u, delta, kappa);
}

double gronwall_envelope(double kappa, double lambda, double t) {
  if (kappa < 0.0 || lambda < 0.0 || t < 0.0) {
    throw std::invalid_argument("gronwall_envelope: arguments must be nonnegative");
  }
  return kappa * std::exp(lambda * t);
}

}  // namespace fluidlim
