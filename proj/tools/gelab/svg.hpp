#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gelab::cli {

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlotSeries {
  enum class Kind { line, points, interval };
  std::string name;
  Kind kind = Kind::line;
  std::string color = "#1f77b4";
  std::vector<PlotPoint> points;
  /// Interval series only: lower and upper end for each point.
  std::vector<PlotPoint> bounds;
};

/// Minimal SVG chart. Every plotted mark carries its data coordinates in data-* attributes so
/// tests can compare figures structurally instead of byte-for-byte.
struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::optional<double> vertical_line;

  std::string render() const;
};

/// One plotted element recovered from rendered SVG: a polyline holds a whole line series, a
/// circle one point, and a line one interval as (x, y) followed by (lo, hi).
struct SvgMark {
  std::string series;
  /// "polyline", "circle" or "line".
  std::string kind;
  std::vector<PlotPoint> points;
};

std::vector<SvgMark> parse_svg_marks(const std::string& svg);

}  // namespace gelab::cli
