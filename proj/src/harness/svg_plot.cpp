#include "ust/harness/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ust {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

double transform(double v, bool log_scale) {
  return log_scale ? std::log10(v) : v;
}

std::vector<double> tick_positions(const Range& r, int target) {
  std::vector<double> ticks;
  const double span = r.hi - r.lo;
  if (span <= 0.0) {
    ticks.push_back(r.lo);
    return ticks;
  }
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const double first = std::ceil(r.lo / step) * step;
  for (double t = first; t <= r.hi + 1e-12 * span; t += step) ticks.push_back(t);
  return ticks;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec) {
  const int width = 640, height = 440;
  const int ml = 70, mr = 20, mt = 40, mb = 55;
  Range rx, ry;
  for (const PlotSeries& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && s.x[i] <= 0.0) continue;
      if (spec.log_y && s.y[i] <= 0.0) continue;
      rx.grow(transform(s.x[i], spec.log_x));
      ry.grow(transform(s.y[i], spec.log_y));
    }
  }
  if (!(rx.lo <= rx.hi)) {
    rx = {0.0, 1.0};
    ry = {0.0, 1.0};
  }
  if (rx.hi == rx.lo) {
    rx.lo -= 0.5;
    rx.hi += 0.5;
  }
  if (ry.hi == ry.lo) {
    ry.lo -= 0.5;
    ry.hi += 0.5;
  }
  const double pad_x = 0.04 * (rx.hi - rx.lo);
  const double pad_y = 0.06 * (ry.hi - ry.lo);
  rx.lo -= pad_x;
  rx.hi += pad_x;
  ry.lo -= pad_y;
  ry.hi += pad_y;

  auto px = [&](double v) {
    return ml + (transform(v, spec.log_x) - rx.lo) / (rx.hi - rx.lo) * (width - ml - mr);
  };
  auto py = [&](double v) {
    return height - mb -
           (transform(v, spec.log_y) - ry.lo) / (ry.hi - ry.lo) * (height - mt - mb);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open plot file: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
      << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='22' text-anchor='middle' font-size='15'>"
      << spec.title << "</text>\n";

  // Axes box.
  out << "<rect x='" << ml << "' y='" << mt << "' width='" << (width - ml - mr)
      << "' height='" << (height - mt - mb)
      << "' fill='none' stroke='#333' stroke-width='1'/>\n";

  for (double t : tick_positions(rx, 6)) {
    const double x = ml + (t - rx.lo) / (rx.hi - rx.lo) * (width - ml - mr);
    out << "<line x1='" << x << "' y1='" << (height - mb) << "' x2='" << x << "' y2='"
        << (height - mb + 5) << "' stroke='#333'/>\n";
    const double label = spec.log_x ? std::pow(10.0, t) : t;
    out << "<text x='" << x << "' y='" << (height - mb + 18)
        << "' text-anchor='middle' font-size='11'>" << fmt(label) << "</text>\n";
  }
  for (double t : tick_positions(ry, 6)) {
    const double y = height - mb - (t - ry.lo) / (ry.hi - ry.lo) * (height - mt - mb);
    out << "<line x1='" << (ml - 5) << "' y1='" << y << "' x2='" << ml << "' y2='" << y
        << "' stroke='#333'/>\n";
    const double label = spec.log_y ? std::pow(10.0, t) : t;
    out << "<text x='" << (ml - 8) << "' y='" << (y + 4)
        << "' text-anchor='end' font-size='11'>" << fmt(label) << "</text>\n";
  }
  out << "<text x='" << (ml + (width - ml - mr) / 2) << "' y='" << (height - 12)
      << "' text-anchor='middle' font-size='13'>" << spec.x_label << "</text>\n";
  out << "<text x='16' y='" << (mt + (height - mt - mb) / 2)
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
      << (mt + (height - mt - mb) / 2) << ")'>" << spec.y_label << "</text>\n";

  int legend_y = mt + 14;
  for (const PlotSeries& s : spec.series) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && s.x[i] <= 0.0) continue;
      if (spec.log_y && s.y[i] <= 0.0) continue;
      pts += fmt(px(s.x[i]));
      pts += ',';
      pts += fmt(py(s.y[i]));
      pts += ' ';
    }
    if (s.draw_line && !pts.empty()) {
      out << "<polyline points='" << pts << "' fill='none' stroke='" << s.color
          << "' stroke-width='1.6'/>\n";
    }
    if (s.draw_points) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (spec.log_x && s.x[i] <= 0.0) continue;
        if (spec.log_y && s.y[i] <= 0.0) continue;
        out << "<circle cx='" << fmt(px(s.x[i])) << "' cy='" << fmt(py(s.y[i]))
            << "' r='3' fill='" << s.color << "'/>\n";
      }
    }
    if (!s.label.empty()) {
      out << "<rect x='" << (width - mr - 150) << "' y='" << (legend_y - 9)
          << "' width='12' height='12' fill='" << s.color << "'/>\n";
      out << "<text x='" << (width - mr - 133) << "' y='" << (legend_y + 1)
          << "' font-size='12'>" << s.label << "</text>\n";
      legend_y += 18;
    }
  }
  out << "</svg>\n";
}

}  // namespace ust
