#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mpscap_cli {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Standalone SVG line chart. Same input, same bytes. Throws ConfigError when
// there is no series or a series has fewer than two finite points.
std::string render_svg(const Plot& plot);
void emit_plot(const Plot& plot, const std::string& path);

}  // namespace mpscap_cli
