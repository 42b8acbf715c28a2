#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pflab {

/// One curve on a log-log chart. Points with non-positive coordinates are
/// dropped (they have no log-log image).
struct PlotSeries {
  std::string name;
  std::string color = "#000000";
  std::string dash;        // SVG dash pattern, empty for solid
  bool markers = false;    // draw circles at the data points
  std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG log-log chart with decade ticks and a legend. Each
/// series becomes one <polyline class="series NAME">, so tests can count and
/// identify elements textually.
std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              std::span<const PlotSeries> series);

}  // namespace pflab
