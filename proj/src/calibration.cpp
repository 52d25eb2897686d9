#include "dxeval/calibration.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "dxeval/error.hpp"
#include "dxeval/inference.hpp"

namespace dxeval {

std::string_view to_string(Binning b) noexcept {
  return b == Binning::EqualWidth ? "equal" : "quantile";
}

Binning parse_binning(std::string_view name) {
  if (name == "equal" || name == "equal_width") return Binning::EqualWidth;
  if (name == "quantile") return Binning::Quantile;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown binning '{}'", name));
}

std::vector<ReliabilityBin> reliability_curve(std::span<const double> scores,
                                              std::span<const int> labels, Binning binning,
                                              std::size_t n_bins) {
  if (n_bins < 2) throw Error(ErrorCode::InvalidBinCount, "need at least two bins");
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  }
  if (scores.empty()) throw Error(ErrorCode::EmptyCohort, "no scored cases");

  std::vector<double> edges;
  if (binning == Binning::EqualWidth) {
    for (std::size_t k = 0; k <= n_bins; ++k) {
      edges.push_back(static_cast<double>(k) / static_cast<double>(n_bins));
    }
  } else {
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    edges.push_back(0.0);
    for (std::size_t k = 1; k < n_bins; ++k) {
      const double q = quantile_sorted(sorted, static_cast<double>(k) / static_cast<double>(n_bins));
      if (q > edges.back() && q < 1.0) edges.push_back(q);
    }
    edges.push_back(1.0);
  }

  const std::size_t nb = edges.size() - 1;
  std::vector<ReliabilityBin> bins(nb);
  // Neumaier compensation, so a bin of identical scores sums exactly
  std::vector<double> carry(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    bins[b].lo = edges[b];
    bins[b].hi = edges[b + 1];
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    // first edge strictly above s, minus one; the top edge closes the last bin
    auto b = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), s) -
                                      edges.begin());
    b = b == 0 ? 0 : std::min(b - 1, nb - 1);
    bins[b].n += 1;
    bins[b].positives += labels[i] == 1;
    const double t = bins[b].score_sum + s;
    carry[b] += std::abs(bins[b].score_sum) >= std::abs(s) ? (bins[b].score_sum - t) + s
                                                            : (s - t) + bins[b].score_sum;
    bins[b].score_sum = t;
  }
  for (std::size_t b = 0; b < nb; ++b) {
    bins[b].score_sum += carry[b];
    if (bins[b].n == 0) continue;
    const auto n = static_cast<double>(bins[b].n);
    bins[b].mean_predicted = std::clamp(bins[b].score_sum / n, bins[b].lo, bins[b].hi);
    bins[b].observed_frequency = static_cast<double>(bins[b].positives) / n;
  }
  return bins;
}

double expected_calibration_error(std::span<const ReliabilityBin> bins) {
  std::size_t total = 0;
  for (const auto& b : bins) total += b.n;
  if (total == 0) throw Error(ErrorCode::AllBinsEmpty, "every bin is empty");
  double gap = 0.0;
  for (const auto& b : bins) {
    if (b.n == 0) continue;
    gap += std::abs(b.score_sum - static_cast<double>(b.positives));
  }
  return gap / static_cast<double>(total);
}

}  // namespace dxeval
