#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "fluidlim/bounds.hpp"
#include "fluidlim/convergence.hpp"
#include "fluidlim/errors.hpp"
#include "fluidlim/io.hpp"
#include "fluidlim/particle_model.hpp"
#include "fluidlim/random_walk.hpp"
#include "svg.hpp"

namespace fluidlim::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  std::string model;
  // particle
  std::int64_t w = 2;
  double mu = 1.0;
  double sigma2 = 0.0;
  std::optional<double> kappa;
  std::optional<double> time_cap;
  // walk
  std::string increments = "normal";

  std::int64_t N = 100;
  std::vector<std::int64_t> ladder;
  double horizon = 1.0;
  double delta = 0.05;
  std::size_t replicates = 500;
  std::uint64_t seed = 0;
  double step = kDefaultOdeStep;
  std::string out;
  std::string csv;
  std::string svg;
  bool overlay_fluid = false;
  bool stop_on_exit = false;
  std::optional<std::uint64_t> max_jumps;
  std::optional<double> bound_kappa;
  std::optional<double> kappa2;
  std::optional<double> kappa3;
  std::string clock = "poisson";
};

void add_model_options(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--model", spec.model, "Model name: particle | walk")
      ->required()
      ->check(CLI::IsMember({"particle", "walk"}));
  sub->add_option("--w", spec.w, "Particle model quantization constant (>= 2)");
  sub->add_option("--mu", spec.mu, "Mean (particle: of B/N; walk: of one step)");
  sub->add_option("--sigma2", spec.sigma2, "Variance (particle: Var B / N; walk: of one step)");
  sub->add_option("--kappa", spec.kappa, "Particle S bound on x0 (default mu + 1)");
  sub->add_option("--time-cap", spec.time_cap, "Particle S bound on rescaled time x2");
  sub->add_option("--increments", spec.increments, "Walk step law: normal | bernoulli | constant")
      ->check(CLI::IsMember({"normal", "bernoulli", "constant"}));
}

ParticleSystemParams particle_params(const RunSpec& spec) {
  ParticleSystemParams p;
  p.w = spec.w;
  p.mu = spec.mu;
  p.sigma2 = spec.sigma2;
  p.kappa = spec.kappa.value_or(spec.mu + 1.0);
  p.N = spec.N;
  p.time_cap = spec.time_cap;
  p.validate();
  return p;
}

IncrementSampler walk_sampler(const RunSpec& spec) {
  if (spec.increments == "bernoulli") return bernoulli_increments(spec.mu);
  if (spec.increments == "constant") return constant_increments(spec.mu);
  return normal_increments(spec.mu, spec.sigma2);
}

ModelFamily make_family(const RunSpec& spec) {
  if (spec.model == "particle") return particle_family(particle_params(spec));
  const IncrementSampler s = walk_sampler(spec);
  ModelFamily f = walk_family(s.mean, s.variance, s);
  f.params.emplace_back(spec.increments == "bernoulli" ? "bernoulli" : spec.increments == "constant" ? "constant" : "normal", 1.0);
  return f;
}

ScalingAssumptions make_assumptions(const RunSpec& spec) {
  ScalingAssumptions a;
  if (spec.model == "particle") {
    a = particle_assumptions(particle_params(spec));
  } else {
    const IncrementSampler s = walk_sampler(spec);
    a = walk_assumptions(s.mean, s.variance);
  }
  if (spec.kappa2) a.kappa2 = *spec.kappa2;
  if (spec.kappa3) a.kappa3 = *spec.kappa3;
  return a;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw IoError("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
    path_ = path;
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed for '" + (path_.empty() ? std::string("stdout") : path_) + "'");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
  std::string path_;
};

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
}

void write_svg_file(const std::string& path, const std::string& title, const std::vector<svg::Series>& series) {
  Output o(path, std::cout);
  svg::write_plot(o.stream(), title, series);
  o.finish();
}

std::vector<svg::Series> fluid_series(const FluidSolution& sol, const std::string& prefix, bool dashed) {
  std::vector<svg::Series> out(sol.dim());
  const double end = sol.end_time();
  for (std::size_t i = 0; i < sol.dim(); ++i) {
    out[i].label = prefix + std::to_string(i);
    out[i].dashed = dashed;
  }
  for (std::size_t k = 0; k < sol.grid_times.size() && sol.grid_times[k] <= end; ++k) {
    for (std::size_t i = 0; i < sol.dim(); ++i) {
      out[i].t.push_back(sol.grid_times[k]);
      out[i].v.push_back(sol.grid_states[k][i]);
    }
  }
  return out;
}

int cmd_simulate(const RunSpec& spec, std::ostream& out) {
  require_positive(spec.horizon, "--horizon");
  if (spec.N < 1) throw std::invalid_argument("--N must be >= 1");
  const ModelFamily family = make_family(spec);
  RngStream rng = RngStream::derive(spec.seed, static_cast<std::uint64_t>(spec.N), 0);
  const ModelInstance inst = family.make(spec.N, rng);
  SimConfig cfg;
  cfg.horizon_u = spec.horizon;
  cfg.master_seed = spec.seed;
  cfg.stop_on_exit = spec.stop_on_exit;
  cfg.max_jumps = spec.max_jumps.value_or(default_max_jumps(family.kappa2, spec.N, spec.horizon));
  const Trajectory traj = simulate(*inst.model, inst.x0, cfg, rng);

  Output o(spec.out, out);
  write_trajectory_csv(o.stream(), traj, inst.model->trajectory_columns());
  o.finish();

  if (!spec.svg.empty()) {
    std::vector<svg::Series> series(traj.dim());
    for (std::size_t i = 0; i < traj.dim(); ++i) {
      series[i].label = "x" + std::to_string(i);
      series[i].staircase = true;
      for (std::size_t n = 0; n < traj.states.size(); ++n) {
        series[i].t.push_back(traj.jump_times[n]);
        series[i].v.push_back(traj.states[n][i]);
      }
      if (traj.jump_times.back() < traj.horizon && traj.terminated_reason != Termination::exited_S) {
        series[i].t.push_back(traj.horizon);
        series[i].v.push_back(traj.states.back()[i]);
      }
    }
    if (spec.overlay_fluid) {
      const FluidSolution sol = integrate(family.field, family.limit_point, spec.horizon, spec.step, family.in_S);
      for (auto& s : fluid_series(sol, "y", true)) series.push_back(std::move(s));
    }
    write_svg_file(spec.svg, family.name + " model, N = " + std::to_string(spec.N), series);
  }
  return kOk;
}

int cmd_fluid(const RunSpec& spec, std::ostream& out) {
  if (!(spec.horizon >= 0.0)) throw std::invalid_argument("--horizon must be >= 0");
  require_positive(spec.step, "--step");
  const ModelFamily family = make_family(spec);
  const FluidSolution sol = integrate(family.field, family.limit_point, spec.horizon, spec.step, family.in_S);
  Output o(spec.out, out);
  write_fluid_csv(o.stream(), sol, family.fluid_columns);
  o.finish();
  if (!spec.svg.empty()) write_svg_file(spec.svg, family.name + " fluid limit", fluid_series(sol, "y", false));
  return kOk;
}

LadderConfig ladder_config(const RunSpec& spec) {
  if (spec.ladder.size() < 2) throw std::invalid_argument("--ladder needs at least two N values");
  if (spec.replicates == 0) throw std::invalid_argument("--replicates must be positive");
  require_positive(spec.horizon, "--horizon");
  require_positive(spec.delta, "--delta");
  require_positive(spec.step, "--step");
  LadderConfig cfg;
  cfg.u = spec.horizon;
  cfg.delta = spec.delta;
  cfg.master_seed = spec.seed;
  cfg.replicates = spec.replicates;
  cfg.N_ladder = spec.ladder;
  cfg.ode_step = spec.step;
  cfg.keep_samples = !spec.csv.empty();
  return cfg;
}

int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const LadderConfig cfg = ladder_config(spec);
  const ConvergenceReport report = run_ladder(make_family(spec), cfg);
  Output o(spec.out, out);
  o.stream() << to_json(report).dump(2) << '\n';
  o.finish();
  if (!spec.csv.empty()) {
    Output c(spec.csv, out);
    write_samples_csv(c.stream(), report.samples);
    c.finish();
  }
  err << std::setprecision(6);
  for (const auto& p : report.per_N) {
    err << "N=" << p.N << "  median sup dev=" << p.median_sup_dev << "  P[dev>delta]=" << p.exceedance.estimate
        << " [" << p.exceedance.lo << ", " << p.exceedance.hi << "]\n";
  }
  if (report.slope_median_dev) err << "slope(log median dev vs log N)=" << *report.slope_median_dev << '\n';
  return kOk;
}

int cmd_exit(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const LadderConfig cfg = ladder_config(spec);
  const ExitReport report = exit_time_convergence(make_family(spec), cfg);
  Output o(spec.out, out);
  o.stream() << to_json(report).dump(2) << '\n';
  o.finish();
  err << std::setprecision(6) << "zeta=" << report.zeta << '\n';
  for (const auto& p : report.per_N) {
    err << "N=" << p.N << "  P[|sigma-zeta|>delta]=" << p.far_from_zeta.estimate;
    if (p.median_sigma) err << "  median sigma=" << *p.median_sigma;
    err << '\n';
  }
  return kOk;
}

int cmd_bounds(const RunSpec& spec, std::ostream& out) {
  if (spec.N < 1) throw std::invalid_argument("--N must be >= 1");
  require_positive(spec.horizon, "--horizon");
  require_positive(spec.delta, "--delta");
  const ScalingAssumptions a = make_assumptions(spec);
  const HydrodynamicBound b = spec.bound_kappa ? hydrodynamic_bound(a, spec.N, spec.horizon, spec.delta, *spec.bound_kappa)
                                               : hydrodynamic_bound(a, spec.N, spec.horizon, spec.delta);
  Output o(spec.out, out);
  o.stream() << to_json(b).dump(2) << '\n';
  o.finish();
  return kOk;
}

int cmd_wlln(const RunSpec& spec, std::ostream& out) {
  if (spec.model != "walk") throw std::invalid_argument("wlln runs on the walk model");
  LadderConfig cfg = ladder_config(spec);
  const WllnReport r = wlln_check(walk_sampler(spec), cfg, spec.clock == "lattice" ? WalkClock::lattice : WalkClock::poisson);
  Output o(spec.out, out);
  o.stream() << to_json(r).dump(2) << '\n';
  o.finish();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate scaled pure-jump Markov processes and check them against their fluid limits"};
  app.name(args.empty() ? "fluidlim" : args.front());
  app.require_subcommand(1);
  RunSpec spec;

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory and write it as CSV");
  add_model_options(simulate_cmd, spec);
  simulate_cmd->add_option("--N", spec.N, "Scale N");
  simulate_cmd->add_option("--horizon", spec.horizon, "Time horizon");
  simulate_cmd->add_option("--seed", spec.seed, "Master seed");
  simulate_cmd->add_option("--out", spec.out, "Output CSV path (default stdout)");
  simulate_cmd->add_option("--svg", spec.svg, "Also write an SVG plot here");
  simulate_cmd->add_flag("--overlay-fluid", spec.overlay_fluid, "Overlay the fluid limit on the SVG");
  simulate_cmd->add_flag("--stop-on-exit", spec.stop_on_exit, "Stop at the first exit from S");
  simulate_cmd->add_option("--step", spec.step, "ODE step for the overlay");
  simulate_cmd->add_option("--max-jumps", spec.max_jumps, "Jump cap (default ceil(4 kappa2 N horizon) + 1000)");

  auto* fluid_cmd = app.add_subcommand("fluid", "Integrate the fluid limit and write it as CSV");
  add_model_options(fluid_cmd, spec);
  fluid_cmd->add_option("--horizon", spec.horizon, "Time horizon");
  fluid_cmd->add_option("--step", spec.step, "RK4 step");
  fluid_cmd->add_option("--out", spec.out, "Output CSV path (default stdout)");
  fluid_cmd->add_option("--svg", spec.svg, "Also write an SVG plot here");

  auto add_ladder = [&](CLI::App* sub) {
    add_model_options(sub, spec);
    sub->add_option("--ladder", spec.ladder, "Increasing N values, comma separated")->delimiter(',')->required();
    sub->add_option("--replicates", spec.replicates, "Replicates per N");
    sub->add_option("--horizon", spec.horizon, "Time horizon u");
    sub->add_option("--delta", spec.delta, "Deviation threshold");
    sub->add_option("--seed", spec.seed, "Master seed");
    sub->add_option("--step", spec.step, "RK4 step for the fluid limit");
    sub->add_option("--out", spec.out, "Output JSON path (default stdout)");
  };
  auto* verify_cmd = app.add_subcommand("verify", "Deviation statistics along an N ladder (JSON)");
  add_ladder(verify_cmd);
  verify_cmd->add_option("--csv", spec.csv, "Write per-replicate deviation samples here");

  auto* exit_cmd = app.add_subcommand("exit", "Exit-time convergence along an N ladder (JSON)");
  add_ladder(exit_cmd);

  auto* wlln_cmd = app.add_subcommand("wlln", "Random-walk law of large numbers check (JSON)");
  add_ladder(wlln_cmd);
  wlln_cmd->add_option("--clock", spec.clock, "poisson | lattice")->check(CLI::IsMember({"poisson", "lattice"}));

  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the martingale deviation bound (JSON)");
  add_model_options(bounds_cmd, spec);
  bounds_cmd->add_option("--N", spec.N, "Scale N");
  bounds_cmd->add_option("--horizon", spec.horizon, "Time horizon u");
  bounds_cmd->add_option("--delta", spec.delta, "Threshold for the squared martingale norm");
  bounds_cmd->add_option("--bound-kappa", spec.bound_kappa, "Jump-count multiplier kappa > kappa2 (default 2 kappa2)");
  bounds_cmd->add_option("--kappa2", spec.kappa2, "Override the rate constant kappa2");
  bounds_cmd->add_option("--kappa3", spec.kappa3, "Override the noise constant kappa3");
  bounds_cmd->add_option("--out", spec.out, "Output JSON path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(spec, out);
    if (fluid_cmd->parsed()) return cmd_fluid(spec, out);
    if (verify_cmd->parsed()) return cmd_verify(spec, out, err);
    if (exit_cmd->parsed()) return cmd_exit(spec, out, err);
    if (wlln_cmd->parsed()) return cmd_wlln(spec, out);
    if (bounds_cmd->parsed()) return cmd_bounds(spec, out);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}

}  // namespace fluidlim::cli
