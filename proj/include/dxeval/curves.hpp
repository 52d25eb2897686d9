#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dxeval {

enum class CurveKind { Roc, Pr };

/// One vertex. `threshold` is the score cutoff (score >= threshold) that
/// produces it; the ROC origin and the PR start point use +infinity.
/// `tp`/`fp` are the counts behind the vertex so areas can be computed
/// exactly.
struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double threshold = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
};

struct CurveSeries {
  CurveKind kind = CurveKind::Roc;
  std::vector<CurvePoint> points;
  double area = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

/// ROC curve with one vertex per distinct score; ties collapse into a single
/// vertex. Throws SingleClass when either class is missing.
CurveSeries roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under an ROC series, evaluated on integer counts. Equal
/// to the Mann-Whitney statistic with ties counted as one half.
double auc(const CurveSeries& roc);

/// Precision-recall curve. Area is average precision,
/// sum over distinct thresholds of (R_k - R_{k-1}) * P_k, with no
/// interpolation. Throws NoPositives.
CurveSeries pr_curve(std::span<const double> scores, std::span<const int> labels);

/// Midrank ROC AUC without building the curve; O(n log n).
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Average precision without keeping the points.
double average_precision(std::span<const double> scores, std::span<const int> labels);

}  // namespace dxeval
