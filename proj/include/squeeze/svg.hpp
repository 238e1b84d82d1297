#pragma once

// Minimal self-contained SVG plots: polyline charts and heatmaps.

#include <string>
#include <vector>

namespace squeeze::svg {

enum class Marker { None, Diamond, Circle };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  Marker marker = Marker::None;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 720;
  int height = 480;
  std::vector<Series> series{};

  std::string render() const;
};

// Values laid out row-major: z[iy * nx + ix].
struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z{};
  int width = 720;
  int height = 480;

  std::string render() const;
};

std::string escape(const std::string& text);
// Diverging palette (blue → white → red) for t ∈ [−1, 1].
std::string diverging_color(double t);

} // namespace squeeze::svg
