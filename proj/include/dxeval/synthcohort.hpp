#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dxeval/cohort.hpp"

namespace dxeval {

/// Latent scores N(mu, sigma^2) per class, mapped to (0,1) by the logistic
/// function. True AUC = Phi((mu_pos - mu_neg) / sqrt(sigma_pos^2 + sigma_neg^2)).
struct BinormalSpec {
  std::size_t n_pos = 100;
  std::size_t n_neg = 100;
  double mu_pos = 1.0;
  double mu_neg = 0.0;
  double sigma_pos = 1.0;
  double sigma_neg = 1.0;
  std::uint64_t seed = 42;
  std::string score_name = "score";
};

double binormal_auc(const BinormalSpec& spec);

/// Mu difference that gives `auc` with unit sigmas.
double binormal_separation_for_auc(double auc);

/// Latent draws and labels, positives first. Throws InvalidSpec.
struct LatentSample {
  std::vector<double> latent;
  std::vector<int> labels;
};
LatentSample binormal_latent(const BinormalSpec& spec);

Cohort generate_binormal(const BinormalSpec& spec);

/// Adds a binormal score column conditional on the cohort's existing labels.
Cohort attach_binormal_scores(const Cohort& cohort, const std::string& name, double mu_pos,
                              double mu_neg, double sigma_pos, double sigma_neg,
                              std::uint64_t seed);

struct UniformScores {
  double lo = 0.0;
  double hi = 1.0;
};
struct ConstantScores {
  double value = 0.5;
};
using ScoreDistribution = std::variant<UniformScores, ConstantScores>;

/// Labels are Bernoulli(score), so the scores are calibrated by construction.
struct CalibratedSpec {
  std::size_t n = 1000;
  ScoreDistribution scores = UniformScores{};
  std::uint64_t seed = 42;
  std::string score_name = "score";
};

Cohort generate_calibrated(const CalibratedSpec& spec);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

/// Independent uniform feature draws.
struct FeatureDistributions {
  Range pct_normal{0.0, 15.0};
  Range neutrophils{2.0, 7.0};
  Range monocytes{0.2, 1.0};
  Range lymphocytes{1.0, 3.0};
};

/// Labels ~ Bernoulli(logistic(b0 + b1 * pct_normal + b2 * SIRI)).
Cohort generate_clinical(std::size_t n, const std::array<double, 3>& betas,
                         const FeatureDistributions& features, std::uint64_t seed,
                         const std::string& id_prefix = "case");

/// Bundled demonstration inputs: a clinical training cohort and a disjoint
/// evaluation cohort carrying an image-model score column "cnn".
struct DemoInputs {
  Cohort train;
  Cohort evaluate;
};
DemoInputs generate_demo(std::uint64_t seed = 2024);

}  // namespace dxeval
