#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "onestreet/errors.hpp"

namespace onestreet {

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal SVG line chart: axes, ticks, one polyline per series, legend.
// CSV remains the canonical output; this is a convenience view.
inline void write_svg_chart(const std::string& path, const std::string& title,
                            const std::string& x_label, const std::string& y_label,
                            const std::vector<ChartSeries>& series) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write chart file: " + path);

  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_min > x_max) {
    x_min = y_min = 0.0;
    x_max = y_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  y_min = std::min(y_min, 0.0);

  const double w = 760, h = 480;
  const double ml = 70, mr = 180, mt = 45, mb = 55;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                  "#3a0ca3", "#f72585", "#4cc9f0", "#606c38", "#bc6c25",
                                  "#003049", "#d62828", "#588157", "#6d597a", "#ffb703"};
  const int palette_size = 20;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" << title << "</text>\n";

  char buf[160];
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n",
                  sx(xv), mt, sx(xv), mt + ph);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n", ml,
                  sy(yv), ml + pw, sy(yv));
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\" "
                  "font-family=\"sans-serif\">%.3g</text>\n",
                  sx(xv), mt + ph + 18, xv);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\" "
                  "font-family=\"sans-serif\">%.3g</text>\n",
                  ml - 6, sy(yv) + 4, yv);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"#333\"/>\n",
                ml, mt, pw, ph);
  out << buf;
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % palette_size];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", sx(x), sy(y));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = mt + 14 + 16 * static_cast<double>(s);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n",
                  ml + pw + 10, ly, ml + pw + 30, ly, color);
    out << buf;
    out << "<text x=\"" << ml + pw + 36 << "\" y=\"" << ly + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace onestreet
