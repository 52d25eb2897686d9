#include "dxeval/dca.hpp"

#include <fmt/format.h>

#include <cmath>

#include "dxeval/error.hpp"

namespace dxeval {
namespace {

void check_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(ErrorCode::ThresholdOutOfRange,
                fmt::format("threshold probability {} outside (0,1)", t));
  }
}

double harm_weight(double t) { return t / (1.0 - t); }

}  // namespace

double net_benefit(const ConfusionCounts& c, double t) {
  check_threshold(t);
  const auto n = static_cast<double>(c.total());
  if (c.total() == 0) throw Error(ErrorCode::EmptyCohort, "net benefit of no cases");
  return static_cast<double>(c.tp) / n - static_cast<double>(c.fp) / n * harm_weight(t);
}

double net_benefit(std::span<const double> scores, std::span<const int> labels, double t) {
  check_threshold(t);
  return net_benefit(confusion_at(scores, labels, t), t);
}

double treat_all_net_benefit(double prevalence, double t) {
  check_threshold(t);
  return prevalence - (1.0 - prevalence) * harm_weight(t);
}

NetBenefitCurve dca_curve(std::span<const double> scores, std::span<const int> labels,
                          std::span<const double> grid, const DcaOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty threshold grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_threshold(grid[i]);
    if (i > 0 && grid[i] < grid[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "threshold grid must be sorted ascending");
    }
  }
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  }
  if (scores.empty()) throw Error(ErrorCode::EmptyCohort, "no scored cases");

  auto cutoff_for = [&](double t) {
    return options.rule == DecisionRule::SameThreshold ? t : options.fixed_cutoff;
  };

  NetBenefitCurve curve;
  curve.n = scores.size();
  std::size_t pos = 0;
  for (int y : labels) pos += y == 1;
  curve.prevalence = static_cast<double>(pos) / static_cast<double>(curve.n);
  for (double t : grid) {
    curve.thresholds.push_back(t);
    curve.model_nb.push_back(net_benefit(confusion_at(scores, labels, cutoff_for(t)), t));
    curve.treat_all_nb.push_back(treat_all_net_benefit(curve.prevalence, t));
    curve.treat_none_nb.push_back(0.0);
  }

  if (options.bootstrap) {
    BootstrapOptions boot = *options.bootstrap;
    IndexStatistic stat = [&](std::span<const std::size_t> rows)
        -> std::optional<std::vector<double>> {
      std::vector<double> s;
      std::vector<int> y;
      s.reserve(rows.size());
      y.reserve(rows.size());
      for (std::size_t r : rows) {
        s.push_back(scores[r]);
        y.push_back(labels[r]);
      }
      std::vector<double> nb;
      nb.reserve(grid.size());
      for (double t : grid) nb.push_back(net_benefit(confusion_at(s, y, cutoff_for(t)), t));
      return nb;
    };
    curve.bands = bootstrap_intervals(scores.size(), stat, boot);
  }
  return curve;
}

std::vector<double> default_dca_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 50; ++k) g.push_back(static_cast<double>(k) / 100.0);
  return g;
}

}  // namespace dxeval
