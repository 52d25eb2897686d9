#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dxeval/cohort.hpp"

namespace dxeval {

enum class CiMethod { Percentile, Bca, DeLong };

std::string_view to_string(CiMethod m) noexcept;
CiMethod parse_ci_method(std::string_view name);

/// Point estimate with two-sided bounds. Violations of lo <= point <= hi are
/// reported through `ordered`, never repaired; clipping to the statistic's
/// natural range is reported through `clipped`.
struct IntervalEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  CiMethod method = CiMethod::Percentile;
  double level = 0.95;
  std::size_t n_replicates = 0;  // bootstrap only
  std::uint64_t seed = 0;        // bootstrap only
  std::size_t redraws = 0;       // replicates redrawn because the statistic was undefined
  double std_error = 0.0;        // replicate SD (bootstrap) or sqrt(variance) (DeLong)
  bool clipped = false;
  bool ordered = true;

  friend bool operator==(const IntervalEstimate&, const IntervalEstimate&) = default;
};

struct BootstrapOptions {
  std::size_t replicates = 1000;
  std::uint64_t seed = 42;
  CiMethod method = CiMethod::Bca;
  std::size_t workers = 1;
  double level = 0.95;
  /// Bounds are clipped into this range when set (e.g. [0,1] for AUC).
  std::optional<std::pair<double, double>> natural_range;
};

inline constexpr std::size_t kMinReplicates = 100;

/// Statistic over a multiset of case indices (a resample). Returns nullopt
/// where undefined, e.g. a resample with one class only. Must be pure and
/// reentrant: it is called concurrently from the worker pool.
using IndexStatistic =
    std::function<std::optional<std::vector<double>>(std::span<const std::size_t> rows)>;

struct ReplicateSet {
  std::vector<double> point;                 // statistic on the original sample
  std::vector<std::vector<double>> values;   // [replicate][component]
  std::vector<std::vector<double>> jackknife;  // [left-out case][component]; BCa only
  std::vector<bool> jackknife_defined;
  std::size_t redraws = 0;
};

/// Draws `options.replicates` resamples of size n_cases with replacement.
/// Replicate r uses RandomStream(seed, r); an undefined replicate is redrawn
/// from the same stream. Total draws are capped at 10 * replicates
/// (TooManyDegenerateReplicates). Output is independent of `workers`.
ReplicateSet bootstrap_replicates(std::size_t n_cases, const IndexStatistic& statistic,
                                  const BootstrapOptions& options);

/// One interval per statistic component, by options.method.
std::vector<IntervalEstimate> bootstrap_intervals(std::size_t n_cases,
                                                  const IndexStatistic& statistic,
                                                  const BootstrapOptions& options);

IntervalEstimate percentile_interval(double point, std::span<const double> replicates,
                                     double level = 0.95);

/// Bias-corrected and accelerated interval. `jackknife` holds leave-one-out
/// values (undefined ones already removed); acceleration is zero when it is
/// empty or constant.
IntervalEstimate bca_interval(double point, std::span<const double> replicates,
                              std::span<const double> jackknife, double level = 0.95);

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

/// View of a resample: rows index into the cohort and may repeat.
class CohortSample {
 public:
  CohortSample(const Cohort& cohort, std::span<const std::size_t> rows)
      : cohort_(&cohort), rows_(rows) {}

  std::size_t size() const noexcept { return rows_.size(); }
  const CaseRecord& operator[](std::size_t i) const { return (*cohort_)[rows_[i]]; }

  /// Scores/labels of the resampled cases carrying `model`.
  void gather(const std::string& model, std::vector<double>& scores,
              std::vector<int>& labels) const;

 private:
  const Cohort* cohort_;
  std::span<const std::size_t> rows_;
};

using Statistic = std::function<std::optional<double>(const CohortSample&)>;

/// Subject-level bootstrap of a scalar statistic over the cohort's cases.
IntervalEstimate bootstrap_ci(const Cohort& cohort, const Statistic& statistic,
                              const BootstrapOptions& options);

/// Bootstrap CIs of ROC AUC and average precision on aligned arrays;
/// single-class resamples (no positive, for AP) are redrawn.
IntervalEstimate bootstrap_auc_ci(std::span<const double> scores, std::span<const int> labels,
                                  BootstrapOptions options);
IntervalEstimate bootstrap_average_precision_ci(std::span<const double> scores,
                                                std::span<const int> labels,
                                                BootstrapOptions options);

struct AucVariance {
  double auc = 0.0;
  double variance = 0.0;
};

/// DeLong structural components for one classifier.
struct Placements {
  std::vector<double> positive;  // V10: per positive, share of negatives it outscores
  std::vector<double> negative;  // V01: per negative, share of positives outscoring it
  double auc = 0.0;
};

/// Midrank placement values. Throws SingleClass, DegenerateClassSize (< 2 per class).
Placements delong_placements(std::span<const double> scores, std::span<const int> labels);

/// AUC and its DeLong variance S10/P + S01/N.
AucVariance delong_variance(std::span<const double> scores, std::span<const int> labels);

/// Wald interval auc +/- z * sqrt(variance), clipped to [0,1].
IntervalEstimate delong_interval(std::span<const double> scores, std::span<const int> labels,
                                 double level = 0.95);

enum class DeLongMode { Paired, Unpaired };

std::string_view to_string(DeLongMode m) noexcept;
DeLongMode parse_delong_mode(std::string_view name);

struct DeLongResult {
  double auc_a = 0.0;
  double auc_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  double covariance = 0.0;
  double z = 0.0;
  double p_two_sided = 1.0;
  DeLongMode mode = DeLongMode::Paired;
  std::size_t n_a = 0;
  std::size_t n_b = 0;

  double difference() const noexcept { return auc_a - auc_b; }
};

/// Both score vectors over the same cases.
DeLongResult delong_compare(std::span<const double> scores_a, std::span<const double> scores_b,
                            std::span<const int> labels);

/// Two independent samples; covariance is zero.
DeLongResult delong_compare(std::span<const double> scores_a, std::span<const int> labels_a,
                            std::span<const double> scores_b, std::span<const int> labels_b);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace dxeval
