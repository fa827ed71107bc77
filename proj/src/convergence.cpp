#include "fluidlim/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluidlim/parallel.hpp"
#include "fluidlim/particle_model.hpp"

namespace fluidlim {

ModelFamily particle_family(const ParticleSystemParams& params) {
  params.validate();
  ModelFamily f;
  f.name = "particle";
  f.params = {{"w", static_cast<double>(params.w)},
              {"mu", params.mu},
              {"sigma2", params.sigma2},
              {"kappa", params.kappa}};
  if (params.time_cap) f.params.emplace_back("time_cap", *params.time_cap);
  f.make = [params](std::int64_t N, RngStream& rng) {
    ParticleSystemParams p = params;
    p.N = N;
    ParticleInstance inst = particle_model(p, rng);
    return ModelInstance{inst.model, inst.x0};
  };
  f.field = particle_limit_field(params);
  f.limit_point = StateVector{params.mu, 0.0, 0.0};
  f.in_S = [params](const StateVector& x) { return particle_in_S(x, params); };
  f.kappa2 = params.kappa;
  const double ratio = static_cast<double>(params.w) / static_cast<double>(params.w - 1);
  f.fluid_columns = ColumnExtension{
      {"h", "e"}, [ratio](const StateVector& y) {
        return std::vector<double>{y[0] - y[2], y[1] * ratio - y[2]};
      }};
  return f;
}

ModelFamily walk_family(double mu, double sigma2, const IncrementSampler& sampler) {
  ModelFamily f;
  f.name = "walk";
  f.params = {{"mu", mu}, {"sigma2", sigma2}};
  f.make = [mu, sigma2, sampler](std::int64_t N, RngStream&) {
    WalkInstance inst = random_walk_model(mu, sigma2, sampler, N);
    return ModelInstance{inst.model, inst.x0};
  };
  f.field = walk_limit_field(mu);
  f.limit_point = StateVector{0.0};
  f.in_S = [](const StateVector&) { return true; };
  f.kappa2 = 1.0;
  return f;
}

namespace {

double deviation_sup(const Trajectory& traj, const FluidSolution& sol, double u, bool stopped) {
  if (traj.states.empty() || sol.grid_states.empty()) throw std::invalid_argument("sup_deviation: empty input");
  if (traj.dim() != sol.dim()) throw std::invalid_argument("sup_deviation: dimension mismatch");
  if (!(u >= 0.0)) throw std::invalid_argument("sup_deviation: u must be >= 0");

  const std::optional<double> sigma = exit_time(traj);
  double s = u;
  if (stopped) {
    if (sigma) s = std::min(u, *sigma);
  } else if (traj.terminated_reason == Termination::exited_S && sigma && *sigma < u) {
    throw std::invalid_argument("sup_deviation_unstopped: trajectory was stopped at its exit time");
  }
  if (traj.terminated_reason == Termination::horizon_reached && traj.horizon < s) {
    throw std::invalid_argument("sup_deviation: trajectory horizon shorter than u");
  }
  const double end = sol.end_time();
  if (s > end + 1e-12 * std::max(1.0, end)) {
    throw std::invalid_argument("sup_deviation: u beyond the fluid solution's range");
  }
  s = std::min(s, end);

  double best = 0.0;
  for (std::size_t n = 0; n < traj.jump_times.size() && traj.jump_times[n] <= s; ++n) {
    const StateVector y = eval_solution(sol, traj.jump_times[n]);
    best = std::max(best, distance(traj.states[n], y));
    if (n > 0) best = std::max(best, distance(traj.states[n - 1], y));
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < sol.grid_times.size() && sol.grid_times[k] <= s; ++k) {
    const double g = sol.grid_times[k];
    while (idx + 1 < traj.jump_times.size() && traj.jump_times[idx + 1] <= g) ++idx;
    best = std::max(best, distance(traj.states[idx], sol.grid_states[k]));
  }
  return std::max(best, distance(traj.state_at(s), eval_solution(sol, s)));
}

void validate_ladder(const LadderConfig& cfg, std::size_t min_replicates) {
  if (cfg.N_ladder.empty()) throw std::invalid_argument("N ladder is empty");
  for (std::size_t i = 0; i < cfg.N_ladder.size(); ++i) {
    if (cfg.N_ladder[i] < 1) throw std::invalid_argument("N ladder entries must be >= 1");
    if (i > 0 && cfg.N_ladder[i] <= cfg.N_ladder[i - 1]) throw std::invalid_argument("N ladder must be increasing");
  }
  if (cfg.replicates < min_replicates) {
    throw std::invalid_argument("need at least " + std::to_string(min_replicates) + " replicates");
  }
  if (!(cfg.u > 0.0) || !std::isfinite(cfg.u)) throw std::invalid_argument("horizon u must be positive");
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("delta must be positive");
}

SimConfig replicate_config(const ModelFamily& family, const LadderConfig& cfg, std::int64_t N, double horizon) {
  SimConfig sim;
  sim.horizon_u = horizon;
  sim.master_seed = cfg.master_seed;
  sim.stop_on_exit = true;
  sim.max_jumps = default_max_jumps(family.kappa2, N, horizon);
  return sim;
}

}  // namespace

double sup_deviation(const Trajectory& traj, const FluidSolution& sol, double u) {
  return deviation_sup(traj, sol, u, true);
}

double sup_deviation_unstopped(const Trajectory& traj, const FluidSolution& sol, double u) {
  return deviation_sup(traj, sol, u, false);
}

ConvergenceReport run_ladder(const ModelFamily& family, const LadderConfig& cfg) {
  validate_ladder(cfg, 100);
  const FluidSolution sol = integrate(family.field, family.limit_point, cfg.u, cfg.ode_step, family.in_S);
  if (sol.zeta && *sol.zeta < cfg.u) {
    throw std::invalid_argument("run_ladder: u exceeds the fluid exit time zeta");
  }

  ConvergenceReport report;
  report.model = family.name;
  report.params = family.params;
  report.u = cfg.u;
  report.delta = cfg.delta;
  report.master_seed = cfg.master_seed;
  report.replicates = cfg.replicates;
  report.N_ladder = cfg.N_ladder;
  report.zeta = sol.zeta;
  report.fluid_horizon = sol.horizon;

  std::vector<double> log_n;
  std::vector<double> log_median;
  std::vector<double> log_exceed;
  bool median_positive = true;
  bool exceed_positive = true;

  for (const std::int64_t N : cfg.N_ladder) {
    const SimConfig sim = replicate_config(family, cfg, N, cfg.u);
    std::vector<DeviationSample> samples(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t r) {
      RngStream rng = RngStream::derive(cfg.master_seed, static_cast<std::uint64_t>(N), r);
      const ModelInstance inst = family.make(N, rng);
      const Trajectory traj = simulate(*inst.model, inst.x0, sim, rng);
      DeviationSample& d = samples[r];
      d.N = N;
      d.replicate = r;
      d.sup_dev = sup_deviation(traj, sol, cfg.u);
      d.sigma_N = exit_time(traj);
      d.exited = d.sigma_N.has_value();
    });

    std::vector<double> devs;
    std::vector<double> sigmas;
    std::uint64_t exceed = 0;
    devs.reserve(samples.size());
    for (const DeviationSample& d : samples) {
      devs.push_back(d.sup_dev);
      if (d.sup_dev > cfg.delta) ++exceed;
      if (d.sigma_N) sigmas.push_back(*d.sigma_N);
    }
    PerNSummary s;
    s.N = N;
    s.median_sup_dev = median(devs);
    s.mean_sup_dev = mean(devs);
    s.exceedance = wilson_interval(exceed, samples.size());
    s.exit_prob = static_cast<double>(sigmas.size()) / static_cast<double>(samples.size());
    if (!sigmas.empty()) s.median_sigma = median(sigmas);
    report.per_N.push_back(s);

    log_n.push_back(std::log(static_cast<double>(N)));
    median_positive = median_positive && s.median_sup_dev > 0.0;
    exceed_positive = exceed_positive && exceed > 0;
    if (median_positive) log_median.push_back(std::log(s.median_sup_dev));
    if (exceed_positive) log_exceed.push_back(std::log(s.exceedance.estimate));
    if (cfg.keep_samples) report.samples.insert(report.samples.end(), samples.begin(), samples.end());
  }
  if (median_positive) report.slope_median_dev = ls_slope(log_n, log_median);
  if (exceed_positive) report.slope_exceedance = ls_slope(log_n, log_exceed);
  return report;
}

ExitReport exit_time_convergence(const ModelFamily& family, const LadderConfig& cfg) {
  validate_ladder(cfg, 1);
  const FluidSolution sol = integrate(family.field, family.limit_point, cfg.u, cfg.ode_step, family.in_S);
  if (!sol.zeta) throw std::invalid_argument("exit_time_convergence: fluid path does not leave S by the horizon");

  ExitReport report;
  report.model = family.name;
  report.zeta = *sol.zeta;
  report.delta = cfg.delta;
  report.horizon = std::max(cfg.u, report.zeta + cfg.delta);

  for (const std::int64_t N : cfg.N_ladder) {
    const SimConfig sim = replicate_config(family, cfg, N, report.horizon);
    std::vector<std::optional<double>> sigma(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t r) {
      RngStream rng = RngStream::derive(cfg.master_seed, static_cast<std::uint64_t>(N), r);
      const ModelInstance inst = family.make(N, rng);
      sigma[r] = exit_time(simulate(*inst.model, inst.x0, sim, rng));
    });
    std::uint64_t far = 0;
    std::vector<double> exited;
    for (const auto& s : sigma) {
      if (!s || std::abs(*s - report.zeta) > cfg.delta) ++far;
      if (s) exited.push_back(*s);
    }
    ExitPerN p;
    p.N = N;
    p.far_from_zeta = wilson_interval(far, sigma.size());
    p.exited_fraction = static_cast<double>(exited.size()) / static_cast<double>(sigma.size());
    if (!exited.empty()) p.median_sigma = median(exited);
    report.per_N.push_back(p);
  }
  return report;
}

double walk_max_deviation(const Trajectory& traj, double mu) {
  if (traj.dim() != 1) throw std::invalid_argument("walk_max_deviation: walk paths are one-dimensional");
  const double end = std::min(1.0, traj.horizon);
  double best = 0.0;
  for (std::size_t n = 1; n < traj.jump_times.size() && traj.jump_times[n] <= end; ++n) {
    const double line = traj.jump_times[n] * mu;
    best = std::max({best, std::abs(traj.states[n - 1][0] - line), std::abs(traj.states[n][0] - line)});
  }
  return std::max(best, std::abs(traj.state_at(end)[0] - end * mu));
}

WllnReport wlln_check(const IncrementSampler& sampler, const LadderConfig& cfg, WalkClock clock) {
  validate_ladder(cfg, 1);
  if (!(sampler.variance >= 0.0)) throw std::invalid_argument("wlln_check: variance must be >= 0");
  const double mu = sampler.mean;
  const double sigma2 = sampler.variance;

  WllnReport report;
  report.mu = mu;
  report.sigma2 = sigma2;
  report.delta = cfg.delta;
  report.clock = clock;

  for (const std::int64_t N : cfg.N_ladder) {
    const WalkInstance inst = random_walk_model(mu, sigma2, sampler, N);
    SimConfig sim;
    sim.horizon_u = 1.0;
    sim.master_seed = cfg.master_seed;
    sim.max_jumps = default_max_jumps(1.0, N, 1.0);
    const double n_real = static_cast<double>(N);

    std::vector<double> devs(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t r) {
      RngStream rng = RngStream::derive(cfg.master_seed, static_cast<std::uint64_t>(N), r);
      if (clock == WalkClock::poisson) {
        devs[r] = walk_max_deviation(simulate(*inst.model, inst.x0, sim, rng), mu);
        return;
      }
      double x = 0.0;
      double best = 0.0;
      for (std::int64_t n = 1; n <= N; ++n) {
        const double line = static_cast<double>(n) / n_real * mu;
        best = std::max(best, std::abs(x - line));
        x += sampler.draw(rng) / n_real;
        best = std::max(best, std::abs(x - line));
      }
      devs[r] = best;
    });

    const auto exceed = static_cast<std::uint64_t>(
        std::count_if(devs.begin(), devs.end(), [&](double d) { return d >= cfg.delta; }));
    WllnPerN p;
    p.N = N;
    p.exceedance = wilson_interval(exceed, devs.size());
    p.chebyshev_bound = sigma2 / (n_real * cfg.delta * cfg.delta);
    p.poisson_bound = (sigma2 + mu * mu) / (n_real * cfg.delta * cfg.delta);
    p.dominated = p.exceedance.estimate <= p.chebyshev_bound + 3.0 * p.exceedance.half_width();
    report.per_N.push_back(p);
  }
  return report;
}

}  // namespace fluidlim
