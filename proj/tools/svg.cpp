#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace fluidlim::svg {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_plot(std::ostream& out, const std::string& title, const std::vector<Series>& series) {
  double t_lo = std::numeric_limits<double>::infinity();
  double t_hi = -t_lo;
  double v_lo = t_lo;
  double v_hi = -t_lo;
  for (const auto& s : series) {
    for (double t : s.t) {
      t_lo = std::min(t_lo, t);
      t_hi = std::max(t_hi, t);
    }
    for (double v : s.v) {
      v_lo = std::min(v_lo, v);
      v_hi = std::max(v_hi, v);
    }
  }
  if (!std::isfinite(t_lo)) t_lo = 0.0, t_hi = 1.0, v_lo = 0.0, v_hi = 1.0;
  if (t_hi <= t_lo) t_hi = t_lo + 1.0;
  if (v_hi <= v_lo) v_hi = v_lo + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double t) { return kLeft + (t - t_lo) / (t_hi - t_lo) * pw; };
  auto sy = [&](double v) { return kTop + (1.0 - (v - v_lo) / (v_hi - v_lo)) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kLeft) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n"
      << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / 4.0;
    const double v = v_lo + (v_hi - v_lo) * i / 4.0;
    out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kHeight - kBottom + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(v) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* colour = kPalette[i % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t k = 0; k < s.t.size() && k < s.v.size(); ++k) {
      if (s.staircase && k > 0) out << num(sx(s.t[k])) << ',' << num(sy(s.v[k - 1])) << ' ';
      out << num(sx(s.t[k])) << ',' << num(sy(s.v[k])) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << num(kWidth - kRight + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
        << num(kWidth - kRight + 34) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    out << "<text x=\"" << num(kWidth - kRight + 40) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace fluidlim::svg
