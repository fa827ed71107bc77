#include "fluidlim/jump_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluidlim {

StateVector drift(const JumpModel& model, const StateVector& x) {
  if (!model.in_D(x)) throw std::domain_error("drift: state outside D");
  return model.rate(x) * model.mean_increment(x);
}

ScalingReport validate_scaling(const JumpModel& model, const ScalingAssumptions& assumptions,
                               const std::vector<StateVector>& probes) {
  if (probes.empty()) throw std::invalid_argument("validate_scaling: no probes");
  if (!std::isfinite(assumptions.kappa2) || !std::isfinite(assumptions.kappa3) ||
      assumptions.kappa2 < 0.0 || assumptions.kappa3 < 0.0) {
    throw std::invalid_argument("validate_scaling: kappa2 and kappa3 must be finite and >= 0");
  }
  const double n = static_cast<double>(model.scale());
  const double rate_cap = assumptions.kappa2 * n;
  const double moment_cap = assumptions.kappa3 / (n * n);

  auto ratio = [](double value, double cap) {
    if (cap > 0.0) return value / cap;
    return value > 0.0 ? INFINITY : 0.0;
  };

  ScalingReport report;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const StateVector& x = probes[i];
    if (!model.in_S(x)) throw std::invalid_argument("validate_scaling: probe outside S");
    const double r = ratio(model.rate(x), rate_cap);
    const double m = ratio(model.second_moment_bound(x), moment_cap);
    report.max_rate_ratio = std::max(report.max_rate_ratio, r);
    report.max_moment_ratio = std::max(report.max_moment_ratio, m);
    if (r > 1.0 || m > 1.0) report.violations.push_back({i, r, m});
  }
  return report;
}

std::vector<StateVector> lattice_grid(const StateVector& lo, const StateVector& hi,
                                      std::size_t points_per_axis, const StatePredicate& keep) {
  if (lo.dim() != hi.dim() || lo.dim() == 0) {
    throw std::invalid_argument("lattice_grid: bad box dimensions");
  }
  if (points_per_axis == 0) throw std::invalid_argument("lattice_grid: need at least one point per axis");
  const std::size_t d = lo.dim();
  std::vector<std::size_t> idx(d, 0);
  std::vector<StateVector> out;
  while (true) {
    StateVector p(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double frac = points_per_axis == 1
                              ? 0.0
                              : static_cast<double>(idx[k]) / static_cast<double>(points_per_axis - 1);
      p[k] = lo[k] + frac * (hi[k] - lo[k]);
    }
    if (!keep || keep(p)) out.push_back(std::move(p));
    std::size_t k = 0;
    while (k < d && ++idx[k] == points_per_axis) idx[k++] = 0;
    if (k == d) break;
  }
  return out;
}

}  // namespace fluidlim
