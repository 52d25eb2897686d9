#include "dxeval/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "dxeval/curves.hpp"
#include "dxeval/error.hpp"
#include "dxeval/random.hpp"

namespace dxeval {
namespace {

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// touched by exactly one thread; the first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void finish(IntervalEstimate& e, const BootstrapOptions& options) {
  if (options.natural_range) {
    const auto [lo, hi] = *options.natural_range;
    const double clo = std::clamp(e.lo, lo, hi);
    const double chi = std::clamp(e.hi, lo, hi);
    e.clipped = clo != e.lo || chi != e.hi;
    e.lo = clo;
    e.hi = chi;
  }
  e.ordered = e.lo <= e.point && e.point <= e.hi;
}

// Midranks (1-based, ties averaged) of v.
std::vector<double> midranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) r[order[k]] = mid;
    i = j;
  }
  return r;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double covariance_of(std::span<const double> a, double ma, std::span<const double> b, double mb) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

DeLongResult finish_test(DeLongResult r) {
  const double diff = r.auc_a - r.auc_b;
  if (r.var_a == 0.0 && r.var_b == 0.0) {
    throw Error(ErrorCode::ZeroVariance, "both AUC estimates have zero variance");
  }
  const double var = r.var_a + r.var_b - 2.0 * r.covariance;
  const double scale = std::max(r.var_a, r.var_b);
  if (var <= 1e-14 * scale) {
    // identical rankings: the difference is exactly zero
    if (std::abs(diff) <= 1e-12) {
      r.z = 0.0;
      r.p_two_sided = 1.0;
      return r;
    }
    throw Error(ErrorCode::ZeroVariance, "variance of the AUC difference is zero");
  }
  r.z = diff / std::sqrt(var);
  r.p_two_sided = std::clamp(std::erfc(std::abs(r.z) / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

}  // namespace

std::string_view to_string(CiMethod m) noexcept {
  switch (m) {
    case CiMethod::Percentile: return "percentile";
    case CiMethod::Bca: return "bca";
    case CiMethod::DeLong: return "delong";
  }
  return "unknown";
}

CiMethod parse_ci_method(std::string_view name) {
  if (name == "percentile") return CiMethod::Percentile;
  if (name == "bca") return CiMethod::Bca;
  if (name == "delong") return CiMethod::DeLong;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown interval method '{}'", name));
}

std::string_view to_string(DeLongMode m) noexcept {
  return m == DeLongMode::Paired ? "paired" : "unpaired";
}

DeLongMode parse_delong_mode(std::string_view name) {
  if (name == "paired") return DeLongMode::Paired;
  if (name == "unpaired") return DeLongMode::Unpaired;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown DeLong mode '{}'", name));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  q = std::clamp(q, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

ReplicateSet bootstrap_replicates(std::size_t n_cases, const IndexStatistic& statistic,
                                  const BootstrapOptions& options) {
  if (options.replicates < kMinReplicates) {
    throw Error(ErrorCode::InvalidReplicateCount,
                fmt::format("need at least {} replicates, got {}",
                            kMinReplicates, options.replicates));
  }
  if (n_cases == 0) throw Error(ErrorCode::EmptyCohort, "nothing to resample");
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence level must lie in (0,1)");
  }

  std::vector<std::size_t> all(n_cases);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto point = statistic(all);
  if (!point || point->empty()) {
    throw Error(ErrorCode::AllUndefined, "statistic is undefined on the original sample");
  }

  ReplicateSet set;
  set.point = std::move(*point);
  const std::size_t width = set.point.size();
  const std::size_t B = options.replicates;
  const std::size_t attempt_cap = 10 * B;

  set.values.resize(B);
  std::vector<std::size_t> attempts(B, 0);
  parallel_for(B, options.workers, [&](std::size_t r) {
    RandomStream rng(options.seed, r);
    std::vector<std::size_t> rows(n_cases);
    for (std::size_t a = 1; a <= attempt_cap; ++a) {
      for (auto& row : rows) row = static_cast<std::size_t>(rng.index(n_cases));
      auto value = statistic(rows);
      if (value) {
        if (value->size() != width) {
          throw Error(ErrorCode::Internal, "statistic changed its output width");
        }
        set.values[r] = std::move(*value);
        attempts[r] = a;
        return;
      }
    }
    attempts[r] = attempt_cap + 1;
  });

  const std::size_t total = std::accumulate(attempts.begin(), attempts.end(), std::size_t{0});
  if (total > attempt_cap) {
    throw Error(ErrorCode::TooManyDegenerateReplicates,
                fmt::format("{} draws needed for {} defined replicates (cap {})", total, B,
                            attempt_cap));
  }
  set.redraws = total - B;

  if (options.method == CiMethod::Bca) {
    set.jackknife.resize(n_cases);
    std::vector<char> defined(n_cases, 0);
    parallel_for(n_cases, options.workers, [&](std::size_t i) {
      std::vector<std::size_t> rows;
      rows.reserve(n_cases - 1);
      for (std::size_t k = 0; k < n_cases; ++k) {
        if (k != i) rows.push_back(k);
      }
      if (rows.empty()) return;
      auto value = statistic(rows);
      if (value && value->size() == width) {
        set.jackknife[i] = std::move(*value);
        defined[i] = 1;
      }
    });
    set.jackknife_defined.assign(defined.begin(), defined.end());
  }
  return set;
}

IntervalEstimate percentile_interval(double point, std::span<const double> replicates,
                                     double level) {
  std::vector<double> sorted(replicates.begin(), replicates.end());
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - level;
  IntervalEstimate e;
  e.point = point;
  e.method = CiMethod::Percentile;
  e.level = level;
  e.lo = quantile_sorted(sorted, alpha / 2.0);
  e.hi = quantile_sorted(sorted, 1.0 - alpha / 2.0);
  e.n_replicates = replicates.size();
  e.std_error = sample_sd(replicates);
  e.ordered = e.lo <= e.point && e.point <= e.hi;
  return e;
}

IntervalEstimate bca_interval(double point, std::span<const double> replicates,
                              std::span<const double> jackknife, double level) {
  std::vector<double> sorted(replicates.begin(), replicates.end());
  std::sort(sorted.begin(), sorted.end());
  const auto B = static_cast<double>(sorted.size());

  // bias correction; ties with the point estimate count one half
  const auto below = std::lower_bound(sorted.begin(), sorted.end(), point) - sorted.begin();
  const auto upto = std::upper_bound(sorted.begin(), sorted.end(), point) - sorted.begin();
  double share = (static_cast<double>(below) + 0.5 * static_cast<double>(upto - below)) / B;
  share = std::clamp(share, 0.5 / B, 1.0 - 0.5 / B);
  const double z0 = normal_quantile(share);

  double accel = 0.0;
  if (jackknife.size() >= 2) {
    const double mean = mean_of(jackknife);
    double num = 0.0, den = 0.0;
    for (double v : jackknife) {
      const double d = mean - v;
      num += d * d * d;
      den += d * d;
    }
    if (den > 0.0) accel = num / (6.0 * std::pow(den, 1.5));
  }

  const double alpha = 1.0 - level;
  auto adjusted = [&](double tail) {
    const double z = normal_quantile(tail);
    const double denom = 1.0 - accel * (z0 + z);
    if (denom <= 0.0) return tail < 0.5 ? 0.0 : 1.0;
    return normal_cdf(z0 + (z0 + z) / denom);
  };

  IntervalEstimate e;
  e.point = point;
  e.method = CiMethod::Bca;
  e.level = level;
  e.lo = quantile_sorted(sorted, adjusted(alpha / 2.0));
  e.hi = quantile_sorted(sorted, adjusted(1.0 - alpha / 2.0));
  e.n_replicates = sorted.size();
  e.std_error = sample_sd(replicates);
  e.ordered = e.lo <= e.point && e.point <= e.hi;
  return e;
}

std::vector<IntervalEstimate> bootstrap_intervals(std::size_t n_cases,
                                                  const IndexStatistic& statistic,
                                                  const BootstrapOptions& options) {
  if (options.method == CiMethod::DeLong) {
    throw Error(ErrorCode::InvalidArgument, "DeLong is not a bootstrap interval method");
  }
  const ReplicateSet set = bootstrap_replicates(n_cases, statistic, options);
  std::vector<IntervalEstimate> out;
  out.reserve(set.point.size());
  std::vector<double> column(set.values.size());
  std::vector<double> jack;
  for (std::size_t k = 0; k < set.point.size(); ++k) {
    for (std::size_t r = 0; r < set.values.size(); ++r) column[r] = set.values[r][k];
    IntervalEstimate e;
    if (options.method == CiMethod::Bca) {
      jack.clear();
      for (std::size_t i = 0; i < set.jackknife.size(); ++i) {
        if (set.jackknife_defined[i]) jack.push_back(set.jackknife[i][k]);
      }
      e = bca_interval(set.point[k], column, jack, options.level);
    } else {
      e = percentile_interval(set.point[k], column, options.level);
    }
    e.seed = options.seed;
    e.redraws = set.redraws;
    finish(e, options);
    out.push_back(e);
  }
  return out;
}

void CohortSample::gather(const std::string& model, std::vector<double>& scores,
                          std::vector<int>& labels) const {
  scores.clear();
  labels.clear();
  for (std::size_t r : rows_) {
    const auto& c = (*cohort_)[r];
    auto it = c.scores.find(model);
    if (it == c.scores.end()) continue;
    scores.push_back(it->second);
    labels.push_back(c.label);
  }
}

IntervalEstimate bootstrap_ci(const Cohort& cohort, const Statistic& statistic,
                              const BootstrapOptions& options) {
  IndexStatistic wrapped = [&](std::span<const std::size_t> rows)
      -> std::optional<std::vector<double>> {
    auto v = statistic(CohortSample(cohort, rows));
    if (!v) return std::nullopt;
    return std::vector<double>{*v};
  };
  return bootstrap_intervals(cohort.size(), wrapped, options).front();
}

namespace {

template <typename Metric>
IntervalEstimate bootstrap_rank_metric(std::span<const double> scores, std::span<const int> labels,
                                       BootstrapOptions options, bool needs_negative,
                                       Metric metric) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  }
  IndexStatistic stat = [&](std::span<const std::size_t> rows)
      -> std::optional<std::vector<double>> {
    std::vector<double> s;
    std::vector<int> y;
    s.reserve(rows.size());
    y.reserve(rows.size());
    std::size_t pos = 0;
    for (std::size_t r : rows) {
      s.push_back(scores[r]);
      y.push_back(labels[r]);
      pos += labels[r] == 1;
    }
    if (pos == 0 || (needs_negative && pos == rows.size())) return std::nullopt;
    return std::vector<double>{metric(s, y)};
  };
  if (!options.natural_range) options.natural_range = {0.0, 1.0};
  return bootstrap_intervals(scores.size(), stat, options).front();
}

}  // namespace

IntervalEstimate bootstrap_auc_ci(std::span<const double> scores, std::span<const int> labels,
                                  BootstrapOptions options) {
  return bootstrap_rank_metric(scores, labels, options, true,
                               [](const auto& s, const auto& y) { return roc_auc(s, y); });
}

IntervalEstimate bootstrap_average_precision_ci(std::span<const double> scores,
                                                std::span<const int> labels,
                                                BootstrapOptions options) {
  return bootstrap_rank_metric(scores, labels, options, false, [](const auto& s, const auto& y) {
    return average_precision(s, y);
  });
}

Placements delong_placements(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  }
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::SingleClass, "DeLong needs both classes");
  if (pos.size() < 2 || neg.size() < 2) {
    throw Error(ErrorCode::DegenerateClassSize, "DeLong needs at least two cases per class");
  }

  std::vector<double> combined(pos);
  combined.insert(combined.end(), neg.begin(), neg.end());
  const auto r_all = midranks(combined);
  const auto r_pos = midranks(pos);
  const auto r_neg = midranks(neg);
  const auto P = static_cast<double>(pos.size());
  const auto N = static_cast<double>(neg.size());

  Placements pl;
  pl.positive.resize(pos.size());
  pl.negative.resize(neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pl.positive[i] = (r_all[i] - r_pos[i]) / N;
  for (std::size_t j = 0; j < neg.size(); ++j) {
    pl.negative[j] = 1.0 - (r_all[pos.size() + j] - r_neg[j]) / P;
  }
  // Mann-Whitney U from the rank sum; midranks are multiples of one half so
  // this is exact and agrees bit for bit with the trapezoid area
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) rank_sum += r_all[i];
  const double doubled_u = 2.0 * rank_sum - P * (P + 1.0);
  pl.auc = doubled_u / (2.0 * P * N);
  return pl;
}

AucVariance delong_variance(std::span<const double> scores, std::span<const int> labels) {
  const Placements pl = delong_placements(scores, labels);
  const double s10 = covariance_of(pl.positive, pl.auc, pl.positive, pl.auc);
  const double s01 = covariance_of(pl.negative, pl.auc, pl.negative, pl.auc);
  return {pl.auc, s10 / static_cast<double>(pl.positive.size()) +
                      s01 / static_cast<double>(pl.negative.size())};
}

IntervalEstimate delong_interval(std::span<const double> scores, std::span<const int> labels,
                                 double level) {
  const AucVariance av = delong_variance(scores, labels);
  const double z = normal_quantile(0.5 + level / 2.0);
  IntervalEstimate e;
  e.point = av.auc;
  e.method = CiMethod::DeLong;
  e.level = level;
  e.std_error = std::sqrt(av.variance);
  e.lo = av.auc - z * e.std_error;
  e.hi = av.auc + z * e.std_error;
  BootstrapOptions clip;
  clip.natural_range = {0.0, 1.0};
  finish(e, clip);
  return e;
}

DeLongResult delong_compare(std::span<const double> scores_a, std::span<const double> scores_b,
                            std::span<const int> labels) {
  if (scores_a.size() != labels.size() || scores_b.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "paired DeLong needs both models on the same cases");
  }
  const Placements a = delong_placements(scores_a, labels);
  const Placements b = delong_placements(scores_b, labels);
  const auto P = static_cast<double>(a.positive.size());
  const auto N = static_cast<double>(a.negative.size());

  DeLongResult r;
  r.mode = DeLongMode::Paired;
  r.n_a = r.n_b = labels.size();
  r.auc_a = a.auc;
  r.auc_b = b.auc;
  r.var_a = covariance_of(a.positive, a.auc, a.positive, a.auc) / P +
            covariance_of(a.negative, a.auc, a.negative, a.auc) / N;
  r.var_b = covariance_of(b.positive, b.auc, b.positive, b.auc) / P +
            covariance_of(b.negative, b.auc, b.negative, b.auc) / N;
  r.covariance = covariance_of(a.positive, a.auc, b.positive, b.auc) / P +
                 covariance_of(a.negative, a.auc, b.negative, b.auc) / N;
  return finish_test(r);
}

DeLongResult delong_compare(std::span<const double> scores_a, std::span<const int> labels_a,
                            std::span<const double> scores_b, std::span<const int> labels_b) {
  const AucVariance a = delong_variance(scores_a, labels_a);
  const AucVariance b = delong_variance(scores_b, labels_b);
  DeLongResult r;
  r.mode = DeLongMode::Unpaired;
  r.n_a = labels_a.size();
  r.n_b = labels_b.size();
  r.auc_a = a.auc;
  r.auc_b = b.auc;
  r.var_a = a.variance;
  r.var_b = b.variance;
  r.covariance = 0.0;
  return finish_test(r);
}

}  // namespace dxeval
