#include <doctest.h>

#include <cmath>
#include <random>

#include "dxeval/curves.hpp"
#include "dxeval/error.hpp"
#include "oracles.hpp"

using namespace dxeval;

TEST_CASE("four-case reference values") {
  const std::vector<double> s{0.9, 0.4, 0.5, 0.1};
  const std::vector<int> y{1, 1, 0, 0};
  CHECK(roc_auc(s, y) == 0.75);
  CHECK(average_precision(s, y) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("ROC starts at the origin and ends at (1,1)") {
  const std::vector<double> s{0.2, 0.2, 0.6, 0.9};
  const std::vector<int> y{0, 1, 0, 1};
  const auto roc = roc_curve(s, y);
  CHECK(roc.points.front().x == 0.0);
  CHECK(roc.points.front().y == 0.0);
  CHECK(std::isinf(roc.points.front().threshold));
  CHECK(roc.points.back().x == 1.0);
  CHECK(roc.points.back().y == 1.0);
  CHECK(auc(roc) == roc.area);
}

TEST_CASE("PR curve starts at recall 0, precision 1") {
  const auto pr = pr_curve(std::vector<double>{0.3, 0.8}, std::vector<int>{1, 0});
  CHECK(pr.points.front().x == 0.0);
  CHECK(pr.points.front().y == 1.0);
  CHECK(pr.area == 0.5);
}

TEST_CASE("trapezoid AUC equals pair counting exactly") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const auto inst = oracle::tiny_instance(rng);
    REQUIRE(roc_auc(inst.scores, inst.labels) == oracle::pair_count_auc(inst.scores, inst.labels));
  }
}

TEST_CASE("average precision equals the ranked walk exactly") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 500; ++k) {
    const auto inst = oracle::tiny_instance(rng);
    const double ap = average_precision(inst.scores, inst.labels);
    REQUIRE(ap == oracle::ranked_walk_ap(inst.scores, inst.labels));
    REQUIRE(ap == doctest::Approx(oracle::ranked_walk_ap_exact(inst.scores, inst.labels).value()).epsilon(1e-14));
  }
}

TEST_CASE("label flip mirrors AUC") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    auto inst = oracle::tiny_instance(rng);
    const double a = roc_auc(inst.scores, inst.labels);
    for (auto& y : inst.labels) y = 1 - y;
    CHECK(roc_auc(inst.scores, inst.labels) == doctest::Approx(1.0 - a).epsilon(1e-15));
  }
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(roc_curve(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), Error);
  CHECK_THROWS_AS(pr_curve(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}), Error);
  CHECK(roc_auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}) == 0.5);
}
