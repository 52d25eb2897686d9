#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dxeval {

/// Counts at one threshold; a case is called positive iff score >= threshold.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double threshold = 0.0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  std::size_t positives() const noexcept { return tp + fn; }
  std::size_t negatives() const noexcept { return tn + fp; }
  std::size_t flagged() const noexcept { return tp + fp; }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Threshold-dependent rates. A disengaged optional is a 0/0 ratio and is
/// rendered as "--", never as 0 or NaN.
struct MetricBundle {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> ppv;
  std::optional<double> npv;
  std::optional<double> f1;
  std::optional<double> accuracy;
  std::optional<double> flagged_fraction;
};

ConfusionCounts confusion_at(std::span<const double> scores, std::span<const int> labels,
                             double threshold);

MetricBundle metrics_from(const ConfusionCounts& c);

struct SweepRow {
  ConfusionCounts counts;
  MetricBundle metrics;
};

/// Grid values must lie in [0,1] and be sorted ascending.
std::vector<SweepRow> threshold_sweep(std::span<const double> scores, std::span<const int> labels,
                                      std::span<const double> grid);

/// Row with the largest F1; ties go to the larger threshold.
const SweepRow& best_f1_operating_point(std::span<const SweepRow> sweep);

/// {0.0, 0.1, ..., 0.5}
std::vector<double> default_threshold_grid();

/// "lo:hi:step" (inclusive of hi up to rounding) or a comma list "0.1,0.2".
/// Values are rounded to 12 decimals so 0.1 steps print cleanly.
std::vector<double> parse_grid(std::string_view text);

}  // namespace dxeval
