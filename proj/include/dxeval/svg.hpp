#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dxeval::svg {

struct Line {
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f77b4";
  std::string label;
  bool dashed = false;
  bool steps = false;  // draw as a right-continuous step function
};

/// Shaded region between lo(x) and hi(x).
struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#1f77b4";
  std::string label;
};

struct Bars {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> height;
  std::string color = "#1f77b4";
  std::string label;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<Band> bands;
  std::vector<Bars> bars;
  std::vector<Line> lines;
  std::vector<std::pair<double, double>> markers;  // scatter points, drawn over lines
  std::optional<std::string> metadata;  // emitted as <metadata> when set
};

/// Deterministic SVG text (fixed 2-decimal coordinates, no timestamps).
std::string render(const Plot& plot);

}  // namespace dxeval::svg
