#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dxeval/cohort.hpp"

namespace dxeval {

/// Systemic inflammation response index: neutrophils * monocytes / lymphocytes.
double compute_siri(const BloodPanel& panel);

enum class WhoMorphology { Normal, Teratozoospermic };

/// WHO strict criteria: normal when at least 4% of sperm are normal forms.
WhoMorphology who_strict_flag(double pct_normal);

inline constexpr double kWhoNormalFormsCutoff = 4.0;

enum class Feature { PctNormal, Siri };

std::string_view to_string(Feature f) noexcept;
Feature parse_feature(std::string_view name);

/// Feature value for one case. SIRI comes from the record when present,
/// otherwise from its blood panel. Throws MissingFeature.
double feature_value(const CaseRecord& c, Feature f);

struct FitOptions {
  double tolerance = 1e-8;       // on |change in deviance|
  int max_iterations = 100;
  double divergence_bound = 20.0;  // any |beta| beyond this is separation
  double ridge = 0.0;             // L2 penalty on slopes; the intercept is never penalised
};

/// Maximum-likelihood logistic regression on an intercept plus the listed
/// predictors, in their given order. Coefficients are per raw unit.
struct LogisticFit {
  std::vector<Feature> predictors;
  std::vector<double> coefficients;  // [intercept, predictors...]
  std::vector<double> std_errors;
  int n_iterations = 0;
  bool converged = false;
  double final_deviance = 0.0;
  double last_deviance_change = 0.0;
  double ridge = 0.0;
  std::size_t n_observations = 0;

  double intercept() const { return coefficients.at(0); }
  /// Coefficient for `f`, or 0 when the model does not use it.
  double coefficient(Feature f) const;
  double linear_predictor(const CaseRecord& c) const;
};

/// Intercept column followed by one column per predictor.
struct Design {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Design build_design(const Cohort& cohort, std::span<const Feature> predictors);

/// Log-likelihood sum_i [y_i eta_i - log(1 + exp(eta_i))].
double log_likelihood(const Design& d, const Eigen::VectorXd& beta);
/// Gradient of log_likelihood with respect to beta: X^T (y - p).
Eigen::VectorXd score_vector(const Design& d, const Eigen::VectorXd& beta);

/// Newton / iteratively reweighted least squares. Deterministic.
/// Errors: SingleClass, InvalidArgument (too few cases), MissingFeature,
/// Singular, Separation, NotConverged.
LogisticFit fit_logistic(const Cohort& train, std::span<const Feature> predictors,
                         const FitOptions& options = {});
LogisticFit fit_logistic(const Design& design, std::vector<Feature> predictors,
                         const FitOptions& options = {});

/// logistic(beta . x) for one case. Throws MissingFeature.
double predict_proba(const LogisticFit& fit, const CaseRecord& c);

/// Scores every case; the result is aligned with `cohort.cases()`.
std::vector<double> predict_proba(const LogisticFit& fit, const Cohort& cohort);

double logistic(double eta) noexcept;

/// Round-trippable JSON document (coefficients at full precision).
std::string fit_to_json(const LogisticFit& fit);
LogisticFit fit_from_json(std::string_view text);

}  // namespace dxeval
