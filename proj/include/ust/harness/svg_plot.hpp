#pragma once

#include <string>
#include <vector>

namespace ust {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool draw_line = true;
  bool draw_points = true;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// Small static SVG chart writer: axes, ticks, polylines, point markers and a
// legend. Enough for the log-log fits and frequency curves the CLI emits.
void write_svg_plot(const std::string& path, const PlotSpec& spec);

}  // namespace ust
