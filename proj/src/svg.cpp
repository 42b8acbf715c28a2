#include "pflab/svg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "pflab/common.hpp"

namespace pflab {

namespace {

constexpr double kWidth = 960.0, kHeight = 640.0;
constexpr double kMarginLeft = 80.0, kMarginRight = 180.0;
constexpr double kMarginTop = 50.0, kMarginBottom = 60.0;

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sanitized_class(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
  return out;
}

std::string num(double v) { return format_double(v); }

}  // namespace

std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              std::span<const PlotSeries> series) {
  double x_min = std::numeric_limits<double>::infinity(), x_max = 0.0;
  double y_min = std::numeric_limits<double>::infinity(), y_max = 0.0;
  for (const PlotSeries& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!(x_min < x_max)) {
    x_min = 0.1;
    x_max = 10.0;
  }
  if (!(y_min <= y_max)) {
    y_min = 0.1;
    y_max = 10.0;
  }
  // Pad to whole decades so tick labels are 10^k.
  const double lx0 = std::floor(std::log10(x_min)), lx1 = std::ceil(std::log10(x_max));
  double ly0 = std::floor(std::log10(y_min)), ly1 = std::ceil(std::log10(y_max));
  if (ly1 - ly0 < 1.0) ly1 = ly0 + 1.0;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) {
    return kMarginLeft + (std::log10(x) - lx0) / std::max(1.0, lx1 - lx0) * plot_w;
  };
  auto sy = [&](double y) {
    return kMarginTop + plot_h - (std::log10(y) - ly0) / std::max(1.0, ly1 - ly0) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
         num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"18\">" + escape_xml(title) + "</text>\n";

  // Frame and decade grid.
  svg += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) + "\" width=\"" +
         num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (double k = lx0; k <= lx1 + 0.5; k += 1.0) {
    const double px = sx(std::pow(10.0, k));
    svg += "<line class=\"grid\" x1=\"" + num(px) + "\" y1=\"" + num(kMarginTop) +
           "\" x2=\"" + num(px) + "\" y2=\"" + num(kMarginTop + plot_h) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(px) + "\" y=\"" + num(kMarginTop + plot_h + 22) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" +
           num(k) + "</text>\n";
  }
  for (double k = ly0; k <= ly1 + 0.5; k += 1.0) {
    const double py = sy(std::pow(10.0, k));
    svg += "<line class=\"grid\" x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(py) +
           "\" x2=\"" + num(kMarginLeft + plot_w) + "\" y2=\"" + num(py) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(kMarginLeft - 8) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" +
           num(k) + "</text>\n";
  }
  svg += "<text x=\"" + num(kMarginLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape_xml(x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + num(kMarginTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 20 " + num(kMarginTop + plot_h / 2) + ")\">" +
         escape_xml(y_label) + "</text>\n";

  // Series.
  double legend_y = kMarginTop + 10.0;
  for (const PlotSeries& s : series) {
    std::string points_attr;
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      points_attr += num(sx(x)) + "," + num(sy(y)) + " ";
    }
    if (points_attr.empty()) continue;
    svg += "<polyline class=\"series " + sanitized_class(s.name) + "\" points=\"" +
           points_attr + "\" fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\"";
    if (!s.dash.empty()) svg += " stroke-dasharray=\"" + s.dash + "\"";
    svg += "/>\n";
    if (s.markers)
      for (const auto& [x, y] : s.points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
        svg += "<circle class=\"marker " + sanitized_class(s.name) + "\" cx=\"" +
               num(sx(x)) + "\" cy=\"" + num(sy(y)) + "\" r=\"3\" fill=\"" + s.color +
               "\"/>\n";
      }
    // Legend entry.
    const double lx = kWidth - kMarginRight + 14.0;
    svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(legend_y) + "\" x2=\"" +
           num(lx + 26) + "\" y2=\"" + num(legend_y) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"";
    if (!s.dash.empty()) svg += " stroke-dasharray=\"" + s.dash + "\"";
    svg += "/>\n";
    svg += "<text x=\"" + num(lx + 32) + "\" y=\"" + num(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(s.name) +
           "</text>\n";
    legend_y += 20.0;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace pflab
