#pragma once

// Minimal self-contained SVG line plots: one polyline per series, inline
// axes, tick labels and legend, no external assets.

#include <string>
#include <vector>

namespace barotherm::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string dash;  // stroke-dasharray, empty for solid
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;  // falls back to linear when any y <= 0
};

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace barotherm::cli
