#include <doctest.h>

#include <cmath>

#include "dxeval/curves.hpp"
#include "dxeval/error.hpp"
#include "dxeval/synthcohort.hpp"
#include "oracles.hpp"

using namespace dxeval;

TEST_CASE("binormal AUC helpers") {
  BinormalSpec s;
  s.mu_pos = 1.0;
  CHECK(binormal_auc(s) == doctest::Approx(oracle::binormal_auc(1.0)));
  CHECK(binormal_separation_for_auc(0.8) == doctest::Approx(1.190232).epsilon(1e-6));
}

TEST_CASE("same spec and seed give identical cohorts") {
  BinormalSpec s;
  s.seed = 99;
  CHECK(generate_binormal(s) == generate_binormal(s));
  s.seed = 100;
  BinormalSpec t;
  t.seed = 99;
  CHECK_FALSE(generate_binormal(s) == generate_binormal(t));
  CHECK(generate_clinical(50, {0, 0, 0}, {}, 1) == generate_clinical(50, {0, 0, 0}, {}, 1));
}

TEST_CASE("logistic mapping preserves every rank statistic") {
  BinormalSpec s;
  s.n_pos = 40;
  s.n_neg = 60;
  s.seed = 8;
  const auto latent = binormal_latent(s);
  const auto cohort = generate_binormal(s);
  std::vector<double> mapped;
  std::vector<int> labels;
  for (const auto& c : cohort.cases()) {
    mapped.push_back(c.scores.at(s.score_name));
    labels.push_back(c.label);
  }
  CHECK(labels == latent.labels);
  CHECK(roc_auc(mapped, labels) == roc_auc(latent.latent, latent.labels));
}

TEST_CASE("large separation approaches AUC 1, none approaches 0.5") {
  BinormalSpec s;
  s.n_pos = 2000;
  s.n_neg = 2000;
  s.mu_pos = 6.0;
  const auto far = binormal_latent(s);
  CHECK(roc_auc(far.latent, far.labels) > 0.999);
  s.mu_pos = 0.0;
  const auto same = binormal_latent(s);
  CHECK(roc_auc(same.latent, same.labels) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("invalid specs") {
  BinormalSpec s;
  s.n_pos = 1;
  CHECK_THROWS_AS(generate_binormal(s), Error);
  s.n_pos = 10;
  s.sigma_neg = 0.0;
  CHECK_THROWS_AS(generate_binormal(s), Error);
  CHECK_THROWS_AS(generate_clinical(0, {0, 0, 0}, {}, 1), Error);
}

TEST_CASE("zero betas give prevalence near one half") {
  const auto c = generate_clinical(20000, {0, 0, 0}, {}, 21);
  CHECK(prevalence(c) == doctest::Approx(0.5).epsilon(0.03));
  for (const auto& r : c.cases()) {
    REQUIRE(r.blood.has_value());
    REQUIRE(r.pct_normal.has_value());
  }
}

TEST_CASE("demo cohorts are disjoint and shaped as documented") {
  const auto demo = generate_demo();
  CHECK(demo.evaluate.size() == 719);
  CHECK(check_disjoint(demo.train, demo.evaluate).empty());
  CHECK(demo.evaluate.score_names() == std::vector<std::string>{"cnn"});
}
