#include <doctest.h>

#include <cmath>

#include "dxeval/dca.hpp"
#include "dxeval/error.hpp"
#include "dxeval/thresholds.hpp"
#include "oracles.hpp"

using namespace dxeval;

TEST_CASE("net benefit from counts") {
  CHECK(net_benefit({10, 20, 60, 10, 0.2}, 0.2) == doctest::Approx(0.1 - 0.2 * 0.25));
  CHECK_THROWS_AS(net_benefit({1, 1, 1, 1, 0.0}, 0.0), Error);
  CHECK_THROWS_AS(net_benefit({1, 1, 1, 1, 1.0}, 1.0), Error);
}

TEST_CASE("treat-all matches its count definition") {
  for (double t : {0.01, 0.1, 0.3, 0.49}) {
    CHECK(treat_all_net_benefit(0.25, t) == doctest::Approx(oracle::treat_all_by_counts(25, 75, t)).epsilon(1e-14));
  }
  CHECK(std::abs(treat_all_net_benefit(0.3, 0.3)) < 1e-12);
}

TEST_CASE("curve agrees with confusion counts at every threshold") {
  const std::vector<double> s{0.05, 0.15, 0.3, 0.45, 0.6, 0.8, 0.9, 0.2};
  const std::vector<int> y{0, 0, 1, 0, 1, 1, 1, 0};
  const auto grid = default_dca_grid();
  const auto c = dca_curve(s, y, grid);
  REQUIRE(c.thresholds.size() == 50);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(c.model_nb[i] == net_benefit(confusion_at(s, y, grid[i]), grid[i]));
    CHECK(c.treat_none_nb[i] == 0.0);
  }
  CHECK(c.bands.empty());
}

TEST_CASE("fixed cutoff rule classifies once") {
  const std::vector<double> s{0.2, 0.7, 0.4, 0.9};
  const std::vector<int> y{0, 1, 1, 0};
  DcaOptions o;
  o.rule = DecisionRule::FixedCutoff;
  o.fixed_cutoff = 0.5;
  const auto c = dca_curve(s, y, std::vector<double>{0.1, 0.3}, o);
  const auto counts = confusion_at(s, y, 0.5);
  CHECK(c.model_nb[0] == net_benefit(counts, 0.1));
  CHECK(c.model_nb[1] == net_benefit(counts, 0.3));
}

TEST_CASE("bootstrap bands bracket the curve and are reproducible") {
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < 120; ++i) {
    y.push_back(i % 3 == 0);
    s.push_back(std::fmod(0.37 * i + (y.back() ? 0.3 : 0.0), 1.0));
  }
  DcaOptions o;
  BootstrapOptions b;
  b.replicates = 200;
  b.method = CiMethod::Percentile;
  o.bootstrap = b;
  const auto grid = std::vector<double>{0.1, 0.2, 0.3};
  const auto c1 = dca_curve(s, y, grid, o);
  const auto c2 = dca_curve(s, y, grid, o);
  REQUIRE(c1.bands.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c1.bands[i].lo <= c1.model_nb[i]);
    CHECK(c1.model_nb[i] <= c1.bands[i].hi);
    CHECK(c1.bands[i].lo == c2.bands[i].lo);
  }
}

TEST_CASE("empty grid is rejected") {
  CHECK_THROWS_AS(dca_curve(std::vector<double>{0.1, 0.9}, std::vector<int>{0, 1}, std::vector<double>{}), Error);
}
