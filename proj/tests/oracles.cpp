#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

double erlang_cdf(int n, double rate, double t) {
  const double x = rate * t;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

std::array<double, 3> particle_fluid(double mu, int w, double t) {
  const double r = static_cast<double>(w) / (w - 1);
  return {mu, mu / r * (1.0 - std::exp(-r * t)), mu * (1.0 - std::exp(-t))};
}

StateVector integral_of_path(const fluidlim::Trajectory& traj, const fluidlim::StateMap& field, double t) {
  std::vector<double> cuts;
  for (double s : traj.jump_times) {
    if (s < t) cuts.push_back(s);
  }
  cuts.push_back(t);
  std::vector<long double> acc(traj.dim(), 0.0L);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const StateVector v = field(traj.state_at(mid));
    for (std::size_t k = 0; k < acc.size(); ++k) {
      acc[k] += static_cast<long double>(cuts[i + 1] - cuts[i]) * static_cast<long double>(v[k]);
    }
  }
  StateVector out(traj.dim());
  for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<double>(acc[k]);
  return out;
}

double sampled_sup(const std::function<StateVector(double)>& f, double u, int points) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    best = std::max(best, f(u * i / points).norm());
  }
  return best;
}

}  // namespace oracle
