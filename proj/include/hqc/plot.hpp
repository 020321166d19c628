#pragma once

// Minimal SVG line chart of f against the swept variable: axes, one
// polyline with a vertex per grid point, and markers on resonant rows.

#include "hqc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace hqc {

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "f";
  bool log_x = false;
  int width = 640;
  int height = 420;
};

inline std::string svg_line_chart(const std::vector<SweepRow>& rows, const PlotOptions& opt) {
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;

  auto xval = [&](double x) { return opt.log_x ? std::log10(x) : x; };
  double xmin = 0.0, xmax = 1.0;
  if (!rows.empty()) {
    xmin = xval(rows.front().x);
    xmax = xval(rows.back().x);
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  auto px = [&](double x) { return left + (xval(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double f) { return top + (1.0 - std::clamp(f, 0.0, 1.0)) * ph; };

  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << opt.title
    << "</text>\n";
  // axes
  s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    s << "<text x=\"" << left - 8 << "\" y=\"" << py(f) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << f
      << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double label = opt.log_x ? std::pow(10.0, xv) : xv;
    s << "<text x=\"" << left + pw * k / 4.0 << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">" << label << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << opt.x_label << "</text>\n";
  s << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << top + ph / 2 << ")\">" << opt.y_label << "</text>\n";

  s << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) s << ' ';
    s << px(rows[i].x) << ',' << py(rows[i].f_mean);
  }
  s << "\"/>\n";
  for (const auto& r : rows) {
    if (!r.resonant) continue;
    s << "<path class=\"resonance\" d=\"M " << px(r.x) << ' ' << py(r.f_mean) - 6 << " l 5 9 l -10 0 z\" fill=\"#c03020\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace hqc
