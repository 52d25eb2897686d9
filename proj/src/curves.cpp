#include "dxeval/curves.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "dxeval/error.hpp"

namespace dxeval {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  double threshold;
  std::size_t tp;
  std::size_t fp;
};

// Cumulative counts at each distinct score, scanning from the highest score.
std::vector<Vertex> cumulative_counts(std::span<const double> scores, std::span<const int> labels,
                                      std::size_t& positives, std::size_t& negatives) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("{} scores vs {} labels", scores.size(), labels.size()));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<Vertex> out;
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      (labels[order[k]] == 1 ? tp : fp) += 1;
      ++k;
    }
    out.push_back({s, tp, fp});
  }
  positives = tp;
  negatives = fp;
  return out;
}

}  // namespace

CurveSeries roc_curve(std::span<const double> scores, std::span<const int> labels) {
  CurveSeries c;
  c.kind = CurveKind::Roc;
  const auto vertices = cumulative_counts(scores, labels, c.positives, c.negatives);
  if (c.positives == 0 || c.negatives == 0) {
    throw Error(ErrorCode::SingleClass, "ROC needs both classes");
  }
  const auto p = static_cast<double>(c.positives);
  const auto n = static_cast<double>(c.negatives);
  c.points.reserve(vertices.size() + 1);
  c.points.push_back({0.0, 0.0, kInf, 0, 0});
  for (const auto& v : vertices) {
    c.points.push_back({static_cast<double>(v.fp) / n, static_cast<double>(v.tp) / p, v.threshold,
                        v.tp, v.fp});
  }
  c.area = auc(c);
  return c;
}

double auc(const CurveSeries& roc) {
  // twice the trapezoid area in units of 1/(P*N): sum dFP * (TP_k + TP_{k-1})
  unsigned long long doubled = 0;
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    const auto& a = roc.points[k - 1];
    const auto& b = roc.points[k];
    doubled += static_cast<unsigned long long>(b.fp - a.fp) * (b.tp + a.tp);
  }
  return static_cast<double>(doubled) /
         (2.0 * static_cast<double>(roc.positives) * static_cast<double>(roc.negatives));
}

CurveSeries pr_curve(std::span<const double> scores, std::span<const int> labels) {
  CurveSeries c;
  c.kind = CurveKind::Pr;
  const auto vertices = cumulative_counts(scores, labels, c.positives, c.negatives);
  if (c.positives == 0) throw Error(ErrorCode::NoPositives, "PR curve needs a positive case");
  const auto p = static_cast<double>(c.positives);

  c.points.reserve(vertices.size() + 1);
  c.points.push_back({0.0, 1.0, kInf, 0, 0});
  double area = 0.0;
  std::size_t prev_tp = 0;
  for (const auto& v : vertices) {
    const double precision = static_cast<double>(v.tp) / static_cast<double>(v.tp + v.fp);
    area += static_cast<double>(v.tp - prev_tp) / p * precision;
    prev_tp = v.tp;
    c.points.push_back({static_cast<double>(v.tp) / p, precision, v.threshold, v.tp, v.fp});
  }
  c.area = area;
  return c;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  return roc_curve(scores, labels).area;
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
  return pr_curve(scores, labels).area;
}

}  // namespace dxeval
