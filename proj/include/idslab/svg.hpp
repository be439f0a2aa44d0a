#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "idslab/csv.hpp"

namespace idslab {

/// Minimal self-contained SVG line charts. Plots are a convenience; the CSV
/// files are the source of truth.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<PlotSeries>& series, bool log_x = false,
                                     bool log_y = false) {
  const double width = 720, height = 480;
  const double left = 70, right = 30, top = 40, bottom = 55;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (log_x && !(s.x[k] > 0)) continue;
      if (log_y && !(s.y[k] > 0)) continue;
      const double px = tx(s.x[k]), py = ty(s.y[k]);
      if (first) {
        x_min = x_max = px;
        y_min = y_max = py;
        first = false;
      } else {
        x_min = std::min(x_min, px);
        x_max = std::max(x_max, px);
        y_min = std::min(y_min, py);
        y_max = std::max(y_max, py);
      }
    }
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
  if (y_max - y_min < 1e-12) y_max = y_min + 1.0;

  auto sx = [&](double v) { return left + (tx(v) - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double v) { return top + plot_h - (ty(v) - y_min) / (y_max - y_min) * plot_h; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
         "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " + format_double(width) +
         " " + format_double(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + format_double(width / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         title + "</text>\n";

  // axes
  svg += "<rect x=\"" + format_double(left) + "\" y=\"" + format_double(top) + "\" width=\"" +
         format_double(plot_w) + "\" height=\"" + format_double(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = x_min + (x_max - x_min) * t / ticks;
    const double fy = y_min + (y_max - y_min) * t / ticks;
    const double px = left + plot_w * t / ticks;
    const double py = top + plot_h - plot_h * t / ticks;
    const double label_x = log_x ? std::pow(10.0, fx) : fx;
    const double label_y = log_y ? std::pow(10.0, fy) : fy;
    svg += "<line x1=\"" + format_double(px) + "\" y1=\"" + format_double(top + plot_h) +
           "\" x2=\"" + format_double(px) + "\" y2=\"" + format_double(top + plot_h + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(px) + "\" y=\"" + format_double(top + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(std::round(label_x * 1e4) / 1e4) + "</text>\n";
    svg += "<line x1=\"" + format_double(left - 5) + "\" y1=\"" + format_double(py) + "\" x2=\"" +
           format_double(left) + "\" y2=\"" + format_double(py) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(left - 8) + "\" y=\"" + format_double(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(std::round(label_y * 1e4) / 1e4) + "</text>\n";
  }
  svg += "<text x=\"" + format_double(left + plot_w / 2) + "\" y=\"" +
         format_double(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
         "</text>\n";
  svg += "<text x=\"18\" y=\"" + format_double(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
         format_double(top + plot_h / 2) + ")\">" + y_label + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = palette[si % (sizeof(palette) / sizeof(palette[0]))];
    std::string points;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (log_x && !(s.x[k] > 0)) continue;
      if (log_y && !(s.y[k] > 0)) continue;
      points += format_double(sx(s.x[k])) + "," + format_double(sy(s.y[k])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = top + 16 + 16 * static_cast<double>(si);
    svg += "<line x1=\"" + format_double(left + plot_w - 130) + "\" y1=\"" + format_double(ly) +
           "\" x2=\"" + format_double(left + plot_w - 110) + "\" y2=\"" + format_double(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_double(left + plot_w - 104) + "\" y=\"" + format_double(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace idslab
