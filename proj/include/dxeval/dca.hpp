#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dxeval/inference.hpp"
#include "dxeval/thresholds.hpp"

namespace dxeval {

/// How the model's positive calls are made at threshold probability t.
enum class DecisionRule {
  SameThreshold,  // score >= t (standard decision-curve convention)
  FixedCutoff,    // score >= a fixed cutoff, t only sets the harm weight
};

/// NB(t) = TP/N - FP/N * t/(1-t). Throws ThresholdOutOfRange unless 0 < t < 1.
double net_benefit(const ConfusionCounts& counts, double t);
double net_benefit(std::span<const double> scores, std::span<const int> labels, double t);

/// Net benefit of calling every case positive: pi - (1-pi) t/(1-t).
double treat_all_net_benefit(double prevalence, double t);

struct DcaOptions {
  DecisionRule rule = DecisionRule::SameThreshold;
  double fixed_cutoff = 0.5;
  /// Bands are computed when set; percentile intervals unless told otherwise.
  std::optional<BootstrapOptions> bootstrap;
};

struct NetBenefitCurve {
  std::vector<double> thresholds;
  std::vector<double> model_nb;
  std::vector<double> treat_all_nb;
  std::vector<double> treat_none_nb;
  std::vector<IntervalEstimate> bands;  // empty unless bootstrapped
  double prevalence = 0.0;
  std::size_t n = 0;
};

/// Grid must be sorted and inside (0,1).
NetBenefitCurve dca_curve(std::span<const double> scores, std::span<const int> labels,
                          std::span<const double> grid, const DcaOptions& options = {});

/// 0.01, 0.02, ..., 0.50
std::vector<double> default_dca_grid();

}  // namespace dxeval
