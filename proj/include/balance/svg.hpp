#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace balance::svg {

struct Point {
  int year = 0;
  std::optional<double> value;
};

struct Chart {
  std::string title;
  std::vector<Point> points;
  std::vector<int> vertical_markers;        // dashed
  std::vector<double> horizontal_lines;     // solid
  std::vector<int> hollow_years;            // drawn as black dots on the x axis
};

/// Line chart of a yearly series; gaps where values are missing. Draws data only.
inline std::string line_chart(const Chart& chart) {
  constexpr double width = 720, height = 320, left = 60, right = 20, top = 36, bottom = 40;
  std::ostringstream out;
  out.precision(6);

  int x_min = 0, x_max = 1;
  double y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& p : chart.points) {
    if (first) x_min = x_max = p.year;
    x_min = std::min(x_min, p.year);
    x_max = std::max(x_max, p.year);
    first = false;
  }
  bool have_y = false;
  auto include_y = [&](double v) {
    if (!std::isfinite(v)) return;
    if (!have_y) y_min = y_max = v;
    y_min = std::min(y_min, v);
    y_max = std::max(y_max, v);
    have_y = true;
  };
  for (const auto& p : chart.points)
    if (p.value) include_y(*p.value);
  for (double h : chart.horizontal_lines) include_y(h);
  if (y_max == y_min) y_max = y_min + 1;
  if (x_max == x_min) x_max = x_min + 1;

  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (width - left - right); };
  auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * (height - top - bottom); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << chart.title
      << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left << "\" y=\"" << height - 20 << "\" font-size=\"11\">" << x_min << "</text>\n";
  out << "<text x=\"" << width - right << "\" y=\"" << height - 20 << "\" text-anchor=\"end\" font-size=\"11\">"
      << x_max << "</text>\n";
  out << "<text x=\"" << left - 4 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << y_max
      << "</text>\n";
  out << "<text x=\"" << left - 4 << "\" y=\"" << height - bottom << "\" text-anchor=\"end\" font-size=\"11\">"
      << y_min << "</text>\n";

  for (int m : chart.vertical_markers) {
    if (m < x_min || m > x_max) continue;
    out << "<line x1=\"" << sx(m) << "\" y1=\"" << top << "\" x2=\"" << sx(m) << "\" y2=\"" << height - bottom
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (double h : chart.horizontal_lines)
    out << "<line x1=\"" << left << "\" y1=\"" << sy(h) << "\" x2=\"" << width - right << "\" y2=\"" << sy(h)
        << "\" stroke=\"gray\"/>\n";

  std::string path;
  for (const auto& p : chart.points) {
    if (!p.value || !std::isfinite(*p.value)) {
      if (!path.empty()) out << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"" << path << "\"/>\n";
      path.clear();
      continue;
    }
    std::ostringstream pt;
    pt.precision(6);
    pt << sx(p.year) << ',' << sy(*p.value) << ' ';
    path += pt.str();
  }
  if (!path.empty()) out << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"" << path << "\"/>\n";
  for (int y : chart.hollow_years)
    out << "<circle cx=\"" << sx(y) << "\" cy=\"" << height - bottom << "\" r=\"3\" fill=\"black\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace balance::svg
