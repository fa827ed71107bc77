#include "fluidlim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fluidlim {

using nlohmann::ordered_json;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

// Splits one logical CSV record; quoted fields may contain separators and
// doubled quotes. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      break;
    } else if (c == '\n') {
      break;
    } else {
      field += c;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

double parse_number(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

void write_row(std::ostream& out, double t, const StateVector& x, const std::optional<ColumnExtension>& extra) {
  out << format_g17(t);
  for (double c : x.coords()) out << ',' << format_g17(c);
  if (extra) {
    for (double v : extra->values(x)) out << ',' << format_g17(v);
  }
  out << "\r\n";
}

void write_header(std::ostream& out, char prefix, std::size_t dim, const std::optional<ColumnExtension>& extra) {
  out << 't';
  for (std::size_t i = 0; i < dim; ++i) out << ',' << prefix << i;
  if (extra) {
    for (const auto& n : extra->names) out << ',' << csv_escape(n);
  }
  out << "\r\n";
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> read_optional(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

ordered_json params_json(const std::vector<std::pair<std::string, double>>& params) {
  ordered_json p = ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return p;
}

std::vector<std::pair<std::string, double>> params_from_json(const ordered_json& j) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [k, v] : j.items()) out.emplace_back(k, v.get<double>());
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::string> fields;
  if (!read_record(in, fields)) throw std::runtime_error("csv: missing header");
  table.header = fields;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != table.header.size()) throw std::runtime_error("csv: ragged row");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_number(f));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::optional<ColumnExtension>& extra) {
  write_header(out, 'x', traj.dim(), extra);
  for (std::size_t n = 0; n < traj.states.size(); ++n) write_row(out, traj.jump_times[n], traj.states[n], extra);
  if (traj.terminated_reason != Termination::exited_S && traj.jump_times.back() < traj.horizon) {
    write_row(out, traj.horizon, traj.states.back(), extra);
  }
}

void write_fluid_csv(std::ostream& out, const FluidSolution& sol, const std::optional<ColumnExtension>& extra) {
  write_header(out, 'y', sol.dim(), extra);
  const double end = sol.end_time();
  for (std::size_t k = 0; k < sol.grid_times.size() && sol.grid_times[k] <= end; ++k) {
    write_row(out, sol.grid_times[k], sol.grid_states[k], extra);
  }
  if (sol.zeta && *sol.zeta <= sol.horizon) write_row(out, *sol.zeta, eval_solution(sol, *sol.zeta), extra);
}

void write_samples_csv(std::ostream& out, const std::vector<DeviationSample>& samples) {
  out << "N,replicate,sup_dev,sigma_N,exited\r\n";
  for (const auto& s : samples) {
    out << s.N << ',' << s.replicate << ',' << format_g17(s.sup_dev) << ','
        << (s.sigma_N ? format_g17(*s.sigma_N) : std::string()) << ',' << (s.exited ? 1 : 0) << "\r\n";
  }
}

std::vector<DeviationSample> read_samples_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  if (t.header != std::vector<std::string>{"N", "replicate", "sup_dev", "sigma_N", "exited"}) {
    throw std::runtime_error("samples csv: unexpected header");
  }
  std::vector<DeviationSample> out;
  for (const auto& r : t.rows) {
    DeviationSample s;
    s.N = static_cast<std::int64_t>(r[0]);
    s.replicate = static_cast<std::uint64_t>(r[1]);
    s.sup_dev = r[2];
    if (!std::isnan(r[3])) s.sigma_N = r[3];
    s.exited = r[4] != 0.0;
    out.push_back(s);
  }
  return out;
}

ordered_json to_json(const ConvergenceReport& r) {
  ordered_json j;
  j["model"] = r.model;
  j["params"] = params_json(r.params);
  j["u"] = r.u;
  j["delta"] = r.delta;
  j["seed"] = r.master_seed;
  j["replicates"] = r.replicates;
  j["N_ladder"] = r.N_ladder;
  ordered_json per = ordered_json::array();
  for (const auto& p : r.per_N) {
    ordered_json e;
    e["N"] = p.N;
    e["median_sup_dev"] = p.median_sup_dev;
    e["mean_sup_dev"] = p.mean_sup_dev;
    e["exceedance"] = p.exceedance.estimate;
    e["exceed_count"] = p.exceedance.successes;
    e["wilson_lo"] = p.exceedance.lo;
    e["wilson_hi"] = p.exceedance.hi;
    e["exit_prob"] = p.exit_prob;
    e["median_sigma"] = optional_number(p.median_sigma);
    per.push_back(std::move(e));
  }
  j["per_N"] = std::move(per);
  j["slope_median_dev"] = optional_number(r.slope_median_dev);
  j["slope_exceedance"] = optional_number(r.slope_exceedance);
  j["zeta"] = optional_number(r.zeta);
  j["fluid_horizon"] = r.fluid_horizon;
  return j;
}

ConvergenceReport convergence_report_from_json(const ordered_json& j) {
  ConvergenceReport r;
  r.model = j.at("model").get<std::string>();
  r.params = params_from_json(j.at("params"));
  r.u = j.at("u").get<double>();
  r.delta = j.at("delta").get<double>();
  r.master_seed = j.at("seed").get<std::uint64_t>();
  r.replicates = j.at("replicates").get<std::size_t>();
  r.N_ladder = j.at("N_ladder").get<std::vector<std::int64_t>>();
  for (const auto& e : j.at("per_N")) {
    PerNSummary p;
    p.N = e.at("N").get<std::int64_t>();
    p.median_sup_dev = e.at("median_sup_dev").get<double>();
    p.mean_sup_dev = e.at("mean_sup_dev").get<double>();
    p.exceedance.estimate = e.at("exceedance").get<double>();
    p.exceedance.successes = e.at("exceed_count").get<std::uint64_t>();
    p.exceedance.trials = r.replicates;
    p.exceedance.lo = e.at("wilson_lo").get<double>();
    p.exceedance.hi = e.at("wilson_hi").get<double>();
    p.exit_prob = e.at("exit_prob").get<double>();
    p.median_sigma = read_optional(e, "median_sigma");
    r.per_N.push_back(p);
  }
  r.slope_median_dev = read_optional(j, "slope_median_dev");
  r.slope_exceedance = read_optional(j, "slope_exceedance");
  r.zeta = read_optional(j, "zeta");
  r.fluid_horizon = j.at("fluid_horizon").get<double>();
  return r;
}

ordered_json to_json(const ExitReport& r) {
  ordered_json j;
  j["model"] = r.model;
  j["zeta"] = r.zeta;
  j["delta"] = r.delta;
  j["horizon"] = r.horizon;
  ordered_json per = ordered_json::array();
  for (const auto& p : r.per_N) {
    ordered_json e;
    e["N"] = p.N;
    e["prob_far"] = p.far_from_zeta.estimate;
    e["far_count"] = p.far_from_zeta.successes;
    e["replicates"] = p.far_from_zeta.trials;
    e["wilson_lo"] = p.far_from_zeta.lo;
    e["wilson_hi"] = p.far_from_zeta.hi;
    e["median_sigma"] = optional_number(p.median_sigma);
    e["exited_fraction"] = p.exited_fraction;
    per.push_back(std::move(e));
  }
  j["per_N"] = std::move(per);
  return j;
}

ExitReport exit_report_from_json(const ordered_json& j) {
  ExitReport r;
  r.model = j.at("model").get<std::string>();
  r.zeta = j.at("zeta").get<double>();
  r.delta = j.at("delta").get<double>();
  r.horizon = j.at("horizon").get<double>();
  for (const auto& e : j.at("per_N")) {
    ExitPerN p;
    p.N = e.at("N").get<std::int64_t>();
    p.far_from_zeta.estimate = e.at("prob_far").get<double>();
    p.far_from_zeta.successes = e.at("far_count").get<std::uint64_t>();
    p.far_from_zeta.trials = e.at("replicates").get<std::uint64_t>();
    p.far_from_zeta.lo = e.at("wilson_lo").get<double>();
    p.far_from_zeta.hi = e.at("wilson_hi").get<double>();
    p.median_sigma = read_optional(e, "median_sigma");
    p.exited_fraction = e.at("exited_fraction").get<double>();
    r.per_N.push_back(p);
  }
  return r;
}

ordered_json to_json(const WllnReport& r) {
  ordered_json j;
  j["mu"] = r.mu;
  j["sigma2"] = r.sigma2;
  j["delta"] = r.delta;
  j["clock"] = r.clock == WalkClock::poisson ? "poisson" : "lattice";
  ordered_json per = ordered_json::array();
  for (const auto& p : r.per_N) {
    ordered_json e;
    e["N"] = p.N;
    e["exceedance"] = p.exceedance.estimate;
    e["wilson_lo"] = p.exceedance.lo;
    e["wilson_hi"] = p.exceedance.hi;
    e["chebyshev_bound"] = p.chebyshev_bound;
    e["poisson_bound"] = p.poisson_bound;
    e["dominated"] = p.dominated;
    per.push_back(std::move(e));
  }
  j["per_N"] = std::move(per);
  return j;
}

ordered_json to_json(const HydrodynamicBound& b) {
  ordered_json j;
  j["N"] = b.N;
  j["u"] = b.u;
  j["delta"] = b.delta;
  j["kappa"] = b.kappa;
  j["bound"] = b.bound;
  j["bound_raw"] = b.bound_raw;
  j["n"] = b.n;
  j["chebyshev_term"] = b.chebyshev_term;
  j["chebyshev_envelope"] = b.chebyshev_envelope;
  j["moment_term"] = b.moment_term;
  return j;
}

}  // namespace fluidlim
