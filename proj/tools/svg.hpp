#ifndef FLUIDLIM_TOOLS_SVG_HPP
#define FLUIDLIM_TOOLS_SVG_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fluidlim::svg {

struct Series {
  std::string label;
  std::vector<double> t;
  std::vector<double> v;
  bool staircase = false;  // piecewise constant, right continuous
  bool dashed = false;
};

/// Self-contained SVG (800x600 viewBox) with one polyline per series, axes
/// and a legend. No external references.
void write_plot(std::ostream& out, const std::string& title, const std::vector<Series>& series);

std::string xml_escape(const std::string& s);

}  // namespace fluidlim::svg

#endif  // FLUIDLIM_TOOLS_SVG_HPP
