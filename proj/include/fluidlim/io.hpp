#ifndef FLUIDLIM_IO_HPP
#define FLUIDLIM_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fluidlim/bounds.hpp"
#include "fluidlim/convergence.hpp"
#include "fluidlim/fluid_ode.hpp"
#include "fluidlim/simulator.hpp"
#include "json.hpp"

namespace fluidlim {

/// Shortest text with 17 significant digits ("%.17g"); parses back exactly.
std::string format_g17(double v);
/// RFC 4180 field quoting (only when the field needs it).
std::string csv_escape(const std::string& field);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses a numeric CSV with a header line. Throws std::runtime_error on
/// malformed input.
CsvTable read_csv(std::istream& in);

/// Header t,x0,...,x{d-1}[,extra...]; one row per jump time, then a row at
/// the horizon unless the path was stopped at its exit from S.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::optional<ColumnExtension>& extra = std::nullopt);

/// Header t,y0,...,y{d-1}[,extra...]; one row per grid point up to the end
/// time, and a row at zeta when the solution exits S.
void write_fluid_csv(std::ostream& out, const FluidSolution& sol,
                     const std::optional<ColumnExtension>& extra = std::nullopt);

/// Header N,replicate,sup_dev,sigma_N,exited; sigma_N empty when absent.
void write_samples_csv(std::ostream& out, const std::vector<DeviationSample>& samples);
std::vector<DeviationSample> read_samples_csv(std::istream& in);

nlohmann::ordered_json to_json(const ConvergenceReport& report);
ConvergenceReport convergence_report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const ExitReport& report);
ExitReport exit_report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const WllnReport& report);
nlohmann::ordered_json to_json(const HydrodynamicBound& bound);

}  // namespace fluidlim

#endif  // FLUIDLIM_IO_HPP
