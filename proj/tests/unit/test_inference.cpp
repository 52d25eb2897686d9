#include <doctest.h>

#include <cmath>
#include <random>

#include "dxeval/curves.hpp"
#include "dxeval/error.hpp"
#include "error_code.hpp"
#include "dxeval/inference.hpp"
#include "dxeval/synthcohort.hpp"
#include "oracles.hpp"

using namespace dxeval;

namespace {

LatentSample sample(std::size_t n_pos, std::size_t n_neg, double delta, std::uint64_t seed) {
  BinormalSpec s;
  s.n_pos = n_pos;
  s.n_neg = n_neg;
  s.mu_pos = delta;
  s.seed = seed;
  return binormal_latent(s);
}

}  // namespace

TEST_CASE("DeLong placements on the four-case example") {
  const std::vector<double> s{0.9, 0.4, 0.5, 0.1};
  const std::vector<int> y{1, 1, 0, 0};
  const auto p = delong_placements(s, y);
  CHECK(p.positive == std::vector<double>{1.0, 0.5});
  CHECK(p.negative == std::vector<double>{0.5, 1.0});
  const auto v = delong_variance(s, y);
  CHECK(v.auc == 0.75);
  CHECK(v.variance == doctest::Approx(0.125));
}

TEST_CASE("DeLong variance matches the pairwise definition") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto inst = oracle::tiny_instance(rng);
    const auto pos = std::count(inst.labels.begin(), inst.labels.end(), 1);
    const auto neg = static_cast<long>(inst.labels.size()) - pos;
    if (pos < 2 || neg < 2) continue;
    const auto hand = oracle::delong_by_hand(inst.scores, inst.labels);
    const auto v = delong_variance(inst.scores, inst.labels);
    CHECK(v.auc == doctest::Approx(hand.auc).epsilon(1e-14));
    CHECK(v.variance == doctest::Approx(hand.variance).epsilon(1e-12));
  }
}

TEST_CASE("DeLong degenerate sizes") {
  CHECK(code_of([] { delong_placements(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}); }) ==
        ErrorCode::SingleClass);
  CHECK(code_of([] { delong_placements(std::vector<double>{0.1, 0.2, 0.3}, std::vector<int>{1, 0, 0}); }) ==
        ErrorCode::DegenerateClassSize);
}

TEST_CASE("identical models give z = 0 and p = 1") {
  const auto d = sample(30, 40, 1.0, 1);
  const auto r = delong_compare(d.latent, d.latent, d.labels);
  CHECK(r.z == 0.0);
  CHECK(r.p_two_sided == 1.0);
}

TEST_CASE("paired comparison agrees with the definition") {
  const auto a = sample(25, 35, 1.0, 10);
  const auto b = sample(25, 35, 0.5, 11);
  const auto r = delong_compare(a.latent, b.latent, a.labels);
  CHECK(r.auc_a == roc_auc(a.latent, a.labels));
  CHECK(r.auc_b == roc_auc(b.latent, a.labels));
  const double var = r.var_a + r.var_b - 2.0 * r.covariance;
  CHECK(r.z == doctest::Approx((r.auc_a - r.auc_b) / std::sqrt(var)));
  CHECK(r.p_two_sided == doctest::Approx(std::erfc(std::abs(r.z) / std::sqrt(2.0))));
  CHECK(r.mode == DeLongMode::Paired);
}

TEST_CASE("unpaired comparison has no covariance term") {
  const auto a = sample(20, 30, 1.0, 12);
  const auto b = sample(25, 20, 1.0, 13);
  const auto r = delong_compare(a.latent, a.labels, b.latent, b.labels);
  CHECK(r.covariance == 0.0);
  CHECK(r.var_a == doctest::Approx(delong_variance(a.latent, a.labels).variance));
  CHECK(r.mode == DeLongMode::Unpaired);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == 2.5);
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("BCa reduces to percentile with no bias and no acceleration") {
  std::vector<double> reps;
  for (int i = 0; i < 1001; ++i) reps.push_back(i / 1000.0);
  // point at the replicate median, symmetric jackknife
  const auto bca = bca_interval(0.5, reps, std::vector<double>{0.4, 0.5, 0.6});
  const auto pct = percentile_interval(0.5, reps);
  CHECK(bca.lo == doctest::Approx(pct.lo).epsilon(1e-3));
  CHECK(bca.hi == doctest::Approx(pct.hi).epsilon(1e-3));
}

TEST_CASE("bootstrap is deterministic and worker-independent") {
  const auto d = sample(60, 90, 1.0, 4);
  BootstrapOptions o;
  o.replicates = 300;
  o.seed = 42;
  const auto one = bootstrap_auc_ci(d.latent, d.labels, o);
  const auto again = bootstrap_auc_ci(d.latent, d.labels, o);
  o.workers = 4;
  const auto four = bootstrap_auc_ci(d.latent, d.labels, o);
  CHECK(one.lo == again.lo);
  CHECK(one.hi == again.hi);
  CHECK(one.lo == four.lo);
  CHECK(one.hi == four.hi);
  CHECK(one.std_error == four.std_error);
  o.seed = 43;
  CHECK(bootstrap_auc_ci(d.latent, d.labels, o).lo != one.lo);
}

TEST_CASE("bootstrap intervals stay in range and bracket the point") {
  const auto d = sample(15, 15, 4.0, 5);
  for (auto method : {CiMethod::Percentile, CiMethod::Bca}) {
    BootstrapOptions o;
    o.replicates = 500;
    o.method = method;
    const auto e = bootstrap_auc_ci(d.latent, d.labels, o);
    CHECK(e.lo >= 0.0);
    CHECK(e.hi <= 1.0);
    CHECK(e.lo <= e.point);
    CHECK(e.point <= e.hi);
    CHECK(e.n_replicates == 500);
  }
}

TEST_CASE("bootstrap argument checks") {
  const auto d = sample(5, 5, 1.0, 6);
  BootstrapOptions o;
  o.replicates = 50;
  CHECK(code_of([&] { bootstrap_auc_ci(d.latent, d.labels, o); }) == ErrorCode::InvalidReplicateCount);

  // defined only when the resample happens to start with case 0: about one
  // draw in fifty, far beyond the ten-attempts-per-replicate budget
  const IndexStatistic rare = [](std::span<const std::size_t> rows) -> std::optional<std::vector<double>> {
    if (rows[0] != 0) return std::nullopt;
    return std::vector<double>{1.0};
  };
  o.replicates = 100;
  CHECK(code_of([&] { bootstrap_replicates(50, rare, o); }) == ErrorCode::TooManyDegenerateReplicates);

  // a lone positive is lost by about a third of resamples; those are redrawn
  std::vector<double> s(40, 0.2);
  std::vector<int> y(40, 0);
  s[0] = 0.9;
  y[0] = 1;
  o.replicates = 200;
  const auto e = bootstrap_auc_ci(s, y, o);
  CHECK(e.redraws > 0);
  CHECK(e.n_replicates == 200);
}

TEST_CASE("normal helpers") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054));
  CHECK(normal_cdf(normal_quantile(0.8)) == doctest::Approx(0.8));
}
