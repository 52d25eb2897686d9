#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dxeval {

enum class Binning { EqualWidth, Quantile };

std::string_view to_string(Binning b) noexcept;
Binning parse_binning(std::string_view name);

/// Half-open [lo, hi); the last bin also holds hi. Empty bins keep n = 0
/// and leave the averages unset.
struct ReliabilityBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  std::size_t positives = 0;
  double score_sum = 0.0;  // compensated sum of the bin's scores
  std::optional<double> mean_predicted;
  std::optional<double> observed_frequency;
};

/// Equal-width bins split [0,1] into n_bins; quantile bins use score
/// quantiles as interior edges, merging duplicate edges (so fewer than
/// n_bins may come back when scores tie heavily).
std::vector<ReliabilityBin> reliability_curve(std::span<const double> scores,
                                              std::span<const int> labels,
                                              Binning binning = Binning::EqualWidth,
                                              std::size_t n_bins = 10);

/// sum_b (n_b / N) |observed_b - mean_predicted_b| over non-empty bins,
/// evaluated as sum_b |score_sum_b - positives_b| / N.
double expected_calibration_error(std::span<const ReliabilityBin> bins);

}  // namespace dxeval
