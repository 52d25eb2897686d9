#pragma once

// Reference implementations used only by the tests. Each one is written the
// slow, obvious way so it shares no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

/// Exact fraction over 64-bit integers, reduced on every operation. Fine for
/// the tiny cohorts the exhaustive oracles run on.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t n, std::int64_t d) {
    const std::int64_t g = std::gcd(n, d);
    return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
  }
  Rational operator+(const Rational& o) const { return of(num * o.den + o.num * den, den * o.den); }
  Rational operator*(const Rational& o) const { return of(num * o.num, den * o.den); }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Mann-Whitney statistic by counting every positive/negative pair; ties
/// count one half. Returned as (2 * wins + ties) / (2 * P * N).
inline double pair_count_auc(const std::vector<double>& s, const std::vector<int>& y) {
  unsigned long long doubled = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) doubled += 2;
      else if (s[i] == s[j]) doubled += 1;
    }
  }
  return static_cast<double>(doubled) / (2.0 * static_cast<double>(pairs));
}

inline std::vector<double> distinct_descending(const std::vector<double>& s) {
  std::set<double, std::greater<>> d(s.begin(), s.end());
  return {d.begin(), d.end()};
}

/// Average precision by walking the ranked list one distinct score at a time
/// and recounting from scratch: sum over cut-offs of (recall gain) * precision.
inline double ranked_walk_ap(const std::vector<double>& s, const std::vector<int>& y) {
  const auto positives = static_cast<double>(std::count(y.begin(), y.end(), 1));
  double ap = 0.0;
  std::size_t prev_tp = 0;
  for (double t : distinct_descending(s)) {
    std::size_t tp = 0, flagged = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        ++flagged;
        tp += y[i] == 1;
      }
    }
    const double precision = static_cast<double>(tp) / static_cast<double>(flagged);
    ap += static_cast<double>(tp - prev_tp) / positives * precision;
    prev_tp = tp;
  }
  return ap;
}

/// The same walk in exact rational arithmetic.
inline Rational ranked_walk_ap_exact(const std::vector<double>& s, const std::vector<int>& y) {
  const auto positives = static_cast<std::int64_t>(std::count(y.begin(), y.end(), 1));
  Rational ap;
  std::int64_t prev_tp = 0;
  for (double t : distinct_descending(s)) {
    std::int64_t tp = 0, flagged = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        ++flagged;
        tp += y[i] == 1;
      }
    }
    ap = ap + Rational::of(tp - prev_tp, positives) * Rational::of(tp, flagged);
    prev_tp = tp;
  }
  return ap;
}

struct Counts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Confusion counts by enumerating every case against the rule score >= t.
inline Counts enumerate_confusion(const std::vector<double>& s, const std::vector<int>& y, double t) {
  Counts c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool flagged = s[i] >= t;
    if (y[i] == 1) (flagged ? c.tp : c.fn) += 1;
    else (flagged ? c.fp : c.tn) += 1;
  }
  return c;
}

/// DeLong variance from the textbook definition: placement values by direct
/// pair comparison, then unbiased sample variances of each set.
struct DeLongHand {
  std::vector<double> v10, v01;
  double auc = 0.0;
  double variance = 0.0;
};

inline double psi(double x, double z) { return x > z ? 1.0 : (x == z ? 0.5 : 0.0); }

inline DeLongHand delong_by_hand(const std::vector<double>& s, const std::vector<int>& y) {
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < s.size(); ++i) (y[i] == 1 ? pos : neg).push_back(s[i]);
  DeLongHand h;
  for (double x : pos) {
    double acc = 0.0;
    for (double z : neg) acc += psi(x, z);
    h.v10.push_back(acc / static_cast<double>(neg.size()));
  }
  for (double z : neg) {
    double acc = 0.0;
    for (double x : pos) acc += psi(x, z);
    h.v01.push_back(acc / static_cast<double>(pos.size()));
  }
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto sample_var = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
  };
  h.auc = mean(h.v10);
  h.variance = sample_var(h.v10) / static_cast<double>(pos.size()) +
               sample_var(h.v01) / static_cast<double>(neg.size());
  return h;
}

/// Central finite-difference gradient of f at x.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double keep = x[k];
    x[k] = keep + h;
    const double up = f(x);
    x[k] = keep - h;
    const double down = f(x);
    x[k] = keep;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Bernoulli log-likelihood of a logistic model summed directly.
inline double logistic_loglik(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                              const std::vector<double>& beta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double eta = beta[0];
    for (std::size_t k = 0; k < x[i].size(); ++k) eta += beta[k + 1] * x[i][k];
    // log(1 + e^eta) evaluated stably
    const double log1pexp = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
    ll += y[i] * eta - log1pexp;
  }
  return ll;
}

/// Treat-all net benefit from its definition: flag everyone, so TP = P and FP = N.
inline double treat_all_by_counts(std::size_t positives, std::size_t negatives, double t) {
  const double n = static_cast<double>(positives + negatives);
  return static_cast<double>(positives) / n - static_cast<double>(negatives) / n * t / (1.0 - t);
}

/// Closed-form binormal AUC for equal variances: Phi(delta / sqrt(2)).
inline double binormal_auc(double delta) { return 0.5 * std::erfc(-delta / 2.0); }

/// Small random instance generator for the exhaustive oracles, with a coarse
/// score grid so ties are common.
struct TinyInstance {
  std::vector<double> scores;
  std::vector<int> labels;
};

inline TinyInstance tiny_instance(std::mt19937_64& rng, std::size_t max_n = 12) {
  std::uniform_int_distribution<std::size_t> size(2, max_n);
  std::uniform_int_distribution<int> level(0, 8);
  std::bernoulli_distribution coin(0.5);
  TinyInstance t;
  const std::size_t n = size(rng);
  for (;;) {
    t.scores.clear();
    t.labels.clear();
    for (std::size_t i = 0; i < n; ++i) {
      t.scores.push_back(level(rng) / 8.0);
      t.labels.push_back(coin(rng) ? 1 : 0);
    }
    const auto p = std::count(t.labels.begin(), t.labels.end(), 1);
    if (p > 0 && p < static_cast<long>(n)) return t;
  }
}

}  // namespace oracle
