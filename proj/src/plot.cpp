#include "softquad/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace softquad {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2"};
constexpr int kPaletteSize = 7;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

bool write_line_plot(const PlotSpec& spec, const std::string& path) {
  bool any = false;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("series '" + s.label + "' size mismatch");
    }
    any = any || !s.x.empty();
  }
  if (!any) return false;

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double pad_y = 0.05 * (y_max - y_min);
  y_min -= pad_y;
  y_max += pad_y;

  const double width = 760, height = 440;
  const double left = 80, right = 40, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\" font-family=\"sans-serif\">"
      << spec.title << "</text>\n";

  // Axes frame plus 5 labelled ticks per axis.
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_min + k * (x_max - x_min) / 4.0;
    const double yv = y_min + k * (y_max - y_min) / 4.0;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << top + plot_h << "\" x2=\""
        << px(xv) << "\" y2=\"" << top + plot_h + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\" "
           "font-family=\"sans-serif\">"
        << fmt(xv) << "</text>\n";
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\""
        << left << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\" "
           "font-family=\"sans-serif\">"
        << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" "
         "font-family=\"sans-serif\">"
      << spec.x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 20 "
      << top + plot_h / 2 << ")\">" << spec.y_label << "</text>\n";

  int color = 0;
  for (const auto& s : spec.series) {
    if (s.x.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[color % kPaletteSize]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    ++color;
  }

  // Legend in the upper-right corner of the plot area.
  color = 0;
  double ly = top + 14;
  for (const auto& s : spec.series) {
    if (s.x.empty()) continue;
    out << "<line x1=\"" << left + plot_w - 150 << "\" y1=\"" << ly
        << "\" x2=\"" << left + plot_w - 125 << "\" y2=\"" << ly
        << "\" stroke=\"" << kPalette[color % kPaletteSize]
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w - 118 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label
        << "</text>\n";
    ly += 18;
    ++color;
  }
  out << "</svg>\n";
  return true;
}

}  // namespace softquad
