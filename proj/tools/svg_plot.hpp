#pragma once

#include <string>
#include <vector>

namespace dlm::plot {

struct Series {
  std::string label;
  std::vector<double> y;  // one value per k = 0, 1, ...
};

struct Figure {
  std::string title;
  std::string x_label = "k";
  std::string y_label;
  std::vector<Series> series;
  // Long series are thinned to at most this many points per polyline.
  std::size_t max_points = 2000;
};

/// Deterministic SVG line chart. Non-finite values break the polyline.
std::string render_svg(const Figure& fig);

}  // namespace dlm::plot
