#include "dxeval/thresholds.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "dxeval/error.hpp"

namespace dxeval {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_aligned(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("{} scores vs {} labels", scores.size(), labels.size()));
  }
  if (scores.empty()) throw Error(ErrorCode::EmptyCohort, "no scored cases");
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

double parse_value(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad grid value '{}'", s));
  }
  return v;
}

}  // namespace

ConfusionCounts confusion_at(std::span<const double> scores, std::span<const int> labels,
                             double threshold) {
  check_aligned(scores, labels);
  ConfusionCounts c;
  c.threshold = threshold;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool called = scores[i] >= threshold;
    if (labels[i] == 1) {
      (called ? c.tp : c.fn) += 1;
    } else {
      (called ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

MetricBundle metrics_from(const ConfusionCounts& c) {
  MetricBundle m;
  m.sensitivity = ratio(c.tp, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  m.ppv = ratio(c.tp, c.tp + c.fp);
  m.npv = ratio(c.tn, c.tn + c.fn);
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.flagged_fraction = ratio(c.tp + c.fp, c.total());
  return m;
}

std::vector<SweepRow> threshold_sweep(std::span<const double> scores, std::span<const int> labels,
                                      std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw Error(ErrorCode::OutOfRange, fmt::format("threshold {} outside [0,1]", grid[i]));
    }
    if (i > 0 && grid[i] < grid[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "threshold grid must be sorted ascending");
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  if (grid.empty()) return rows;
  check_aligned(scores, labels);
  for (double t : grid) {
    const auto c = confusion_at(scores, labels, t);
    rows.push_back({c, metrics_from(c)});
  }
  return rows;
}

const SweepRow& best_f1_operating_point(std::span<const SweepRow> sweep) {
  if (sweep.empty()) throw Error(ErrorCode::InvalidArgument, "empty sweep");
  const SweepRow* best = nullptr;
  for (const auto& row : sweep) {
    if (!row.metrics.f1) continue;
    if (!best || *row.metrics.f1 > *best->metrics.f1 ||
        (*row.metrics.f1 == *best->metrics.f1 && row.counts.threshold > best->counts.threshold)) {
      best = &row;
    }
  }
  if (!best) throw Error(ErrorCode::AllUndefined, "F1 undefined at every threshold");
  return *best;
}

std::vector<double> default_threshold_grid() { return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}; }

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "range grid must be lo:hi:step");
    }
    const double lo = parse_value(text.substr(0, a));
    const double hi = parse_value(text.substr(a + 1, b - a - 1));
    const double step = parse_value(text.substr(b + 1));
    if (!(step > 0.0) || hi < lo) {
      throw Error(ErrorCode::InvalidArgument, "range grid needs step > 0 and hi >= lo");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(round12(lo + static_cast<double>(i) * step));
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (!piece.empty()) out.push_back(parse_value(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace dxeval
