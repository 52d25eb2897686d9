#include "dxeval/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dxeval::svg {
namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 56.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

struct Frame {
  const Plot& p;
  double px(double x) const {
    const double t = (std::clamp(x, p.x_min, p.x_max) - p.x_min) / (p.x_max - p.x_min);
    return kLeft + t * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double t = (std::clamp(y, p.y_min, p.y_max) - p.y_min) / (p.y_max - p.y_min);
    return kHeight - kBottom - t * (kHeight - kTop - kBottom);
  }
};

std::string tick_label(double v) { return fmt::format("{:.2g}", v); }

}  // namespace

std::string render(const Plot& p) {
  const Frame f{p};
  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight, kWidth, kHeight);
  if (p.metadata) out += fmt::format("<metadata>{}</metadata>\n", escape(*p.metadata));
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += fmt::format("<text x=\"{:.2f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kWidth / 2.0, escape(p.title));

  // axes box and ticks
  out += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  for (int k = 0; k <= 5; ++k) {
    const double xv = p.x_min + (p.x_max - p.x_min) * k / 5.0;
    const double yv = p.y_min + (p.y_max - p.y_min) * k / 5.0;
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
        f.px(xv), kHeight - kBottom, kHeight - kBottom + 5.0, kHeight - kBottom + 18.0,
        tick_label(xv));
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
        kLeft - 5.0, f.py(yv), kLeft, kLeft - 8.0, f.py(yv) + 4.0, tick_label(yv));
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     (kLeft + kWidth - kRight) / 2.0, kHeight - 16.0, escape(p.x_label));
  out += fmt::format(
      "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">{1}"
      "</text>\n",
      (kTop + kHeight - kBottom) / 2.0, escape(p.y_label));

  for (const auto& b : p.bands) {
    if (b.x.empty()) continue;
    std::string pts;
    for (std::size_t i = 0; i < b.x.size(); ++i) pts += fmt::format("{:.2f},{:.2f} ", f.px(b.x[i]), f.py(b.hi[i]));
    for (std::size_t i = b.x.size(); i-- > 0;) pts += fmt::format("{:.2f},{:.2f} ", f.px(b.x[i]), f.py(b.lo[i]));
    pts.pop_back();
    out += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n",
                       pts, b.color);
  }
  for (const auto& b : p.bars) {
    for (std::size_t i = 0; i < b.height.size(); ++i) {
      if (b.height[i] <= 0.0) continue;
      const double x0 = f.px(b.left[i]);
      const double x1 = f.px(b.right[i]);
      const double y1 = f.py(b.height[i]);
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
          "fill-opacity=\"0.5\"/>\n",
          x0, y1, x1 - x0, f.py(p.y_min) - y1, b.color);
    }
  }
  for (const auto& l : p.lines) {
    if (l.points.empty()) continue;
    std::string pts;
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      if (l.steps && i > 0) {
        pts += fmt::format("{:.2f},{:.2f} ", f.px(l.points[i].first), f.py(l.points[i - 1].second));
      }
      pts += fmt::format("{:.2f},{:.2f} ", f.px(l.points[i].first), f.py(l.points[i].second));
    }
    pts.pop_back();
    out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n",
                       pts, l.color, l.dashed ? " stroke-dasharray=\"5,4\"" : "");
  }
  for (const auto& [x, y] : p.markers) {
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#d62728\"/>\n", f.px(x),
                       f.py(y));
  }

  // legend
  double ly = kTop + 14.0;
  auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
    if (label.empty()) return;
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"{4}/><text x=\"{5:.2f}\" y=\"{6:.2f}\">{7}</text>\n",
        kWidth - kRight - 150.0, ly, kWidth - kRight - 128.0, color,
        dashed ? " stroke-dasharray=\"5,4\"" : "", kWidth - kRight - 122.0, ly + 4.0,
        escape(label));
    ly += 16.0;
  };
  for (const auto& l : p.lines) legend(l.label, l.color, l.dashed);
  for (const auto& b : p.bands) legend(b.label, b.color, false);
  for (const auto& b : p.bars) legend(b.label, b.color, false);

  out += "</svg>\n";
  return out;
}

}  // namespace dxeval::svg
