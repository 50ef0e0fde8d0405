// Deterministic SVG line plots (axes, units, legends) for telemetry and
// trajectory artifacts.
#pragma once

#include <string>
#include <vector>

namespace softquad {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;  // include units, e.g. "time [s]"
  std::string y_label;
  std::vector<PlotSeries> series;
};

// Writes an SVG line plot. Returns false (and writes nothing) when every
// series is empty; the caller should emit a warning in that case.
bool write_line_plot(const PlotSpec& spec, const std::string& path);

}  // namespace softquad
