#include "dxeval/baseline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "dxeval/error.hpp"

namespace dxeval {
namespace {

double softplus(double eta) noexcept {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

Eigen::VectorXd probabilities(const Design& d, const Eigen::VectorXd& beta) {
  Eigen::VectorXd eta = d.x * beta;
  return eta.unaryExpr([](double e) { return logistic(e); });
}

// Diagonal mask: ridge applies to slopes only.
Eigen::VectorXd penalty_mask(Eigen::Index p) {
  Eigen::VectorXd m = Eigen::VectorXd::Ones(p);
  m(0) = 0.0;
  return m;
}

double penalised_deviance(const Design& d, const Eigen::VectorXd& beta, double ridge,
                          const Eigen::VectorXd& mask) {
  double dev = -2.0 * log_likelihood(d, beta);
  if (ridge > 0.0) dev += ridge * beta.cwiseProduct(mask).squaredNorm();
  return dev;
}

Eigen::MatrixXd hessian(const Design& d, const Eigen::VectorXd& mu, double ridge,
                        const Eigen::VectorXd& mask) {
  const Eigen::VectorXd w = mu.cwiseProduct((1.0 - mu.array()).matrix());
  Eigen::MatrixXd h = d.x.transpose() * w.asDiagonal() * d.x;
  if (ridge > 0.0) h.diagonal() += ridge * mask;
  return h;
}

}  // namespace

double logistic(double eta) noexcept {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double compute_siri(const BloodPanel& p) {
  if (p.lymphocytes == 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "SIRI needs a non-zero lymphocyte count");
  }
  return p.neutrophils * p.monocytes / p.lymphocytes;
}

WhoMorphology who_strict_flag(double pct_normal) {
  if (!(pct_normal >= 0.0 && pct_normal <= 100.0)) {
    throw Error(ErrorCode::OutOfRange, fmt::format("percent normal {} outside [0,100]", pct_normal));
  }
  return pct_normal >= kWhoNormalFormsCutoff ? WhoMorphology::Normal
                                             : WhoMorphology::Teratozoospermic;
}

std::string_view to_string(Feature f) noexcept {
  switch (f) {
    case Feature::PctNormal: return "pct_normal";
    case Feature::Siri: return "siri";
  }
  return "unknown";
}

Feature parse_feature(std::string_view name) {
  if (name == "pct_normal") return Feature::PctNormal;
  if (name == "siri") return Feature::Siri;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown predictor '{}'", name));
}

double feature_value(const CaseRecord& c, Feature f) {
  switch (f) {
    case Feature::PctNormal:
      if (c.pct_normal) return *c.pct_normal;
      break;
    case Feature::Siri:
      if (c.siri) return *c.siri;
      if (c.blood) return compute_siri(*c.blood);
      break;
  }
  throw Error(ErrorCode::MissingFeature,
              fmt::format("case '{}' has no {}", c.case_id, to_string(f)));
}

double LogisticFit::coefficient(Feature f) const {
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    if (predictors[i] == f) return coefficients.at(i + 1);
  }
  return 0.0;
}

double LogisticFit::linear_predictor(const CaseRecord& c) const {
  double eta = coefficients.at(0);
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    eta += coefficients.at(i + 1) * feature_value(c, predictors[i]);
  }
  return eta;
}

Design build_design(const Cohort& cohort, std::span<const Feature> predictors) {
  const auto n = static_cast<Eigen::Index>(cohort.size());
  const auto p = static_cast<Eigen::Index>(predictors.size()) + 1;
  Design d{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = cohort[static_cast<std::size_t>(i)];
    d.x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) {
      d.x(i, j) = feature_value(c, predictors[static_cast<std::size_t>(j - 1)]);
    }
    d.y(i) = c.label;
  }
  return d;
}

double log_likelihood(const Design& d, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = d.x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += d.y(i) * eta(i) - softplus(eta(i));
  return ll;
}

Eigen::VectorXd score_vector(const Design& d, const Eigen::VectorXd& beta) {
  return d.x.transpose() * (d.y - probabilities(d, beta));
}

LogisticFit fit_logistic(const Cohort& train, std::span<const Feature> predictors,
                         const FitOptions& options) {
  if (train.positives() == 0 || train.negatives() == 0) {
    throw Error(ErrorCode::SingleClass, "training cohort must contain both classes");
  }
  return fit_logistic(build_design(train, predictors),
                      std::vector<Feature>(predictors.begin(), predictors.end()), options);
}

LogisticFit fit_logistic(const Design& d, std::vector<Feature> predictors,
                         const FitOptions& options) {
  const Eigen::Index n = d.x.rows();
  const Eigen::Index p = d.x.cols();
  if (p != static_cast<Eigen::Index>(predictors.size()) + 1) {
    throw Error(ErrorCode::InvalidArgument, "design width does not match predictor list");
  }
  if (n <= p) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} cases cannot identify {} coefficients", n, p));
  }
  const double positives = d.y.sum();
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    throw Error(ErrorCode::SingleClass, "training data must contain both classes");
  }
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(d.x).rank() < p) {
    throw Error(ErrorCode::Singular, "design matrix is rank-deficient");
  }

  const Eigen::VectorXd mask = penalty_mask(p);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double dev = penalised_deviance(d, beta, options.ridge, mask);

  LogisticFit fit;
  fit.predictors = std::move(predictors);
  fit.ridge = options.ridge;
  fit.n_observations = static_cast<std::size_t>(n);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const Eigen::VectorXd mu = probabilities(d, beta);
    Eigen::VectorXd grad = d.x.transpose() * (d.y - mu);
    if (options.ridge > 0.0) grad -= options.ridge * beta.cwiseProduct(mask);
    const Eigen::MatrixXd h = hessian(d, mu, options.ridge, mask);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    const Eigen::VectorXd dvals = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || dvals.minCoeff() <= 1e-12 * dvals.cwiseAbs().maxCoeff()) {
      throw Error(ErrorCode::Separation,
                  fmt::format("information matrix numerically singular at iteration {}", iter));
    }
    const Eigen::VectorXd step = ldlt.solve(grad);

    // Newton step with halving; the penalised deviance must not increase.
    double scale = 1.0;
    Eigen::VectorXd next = beta + step;
    double next_dev = penalised_deviance(d, next, options.ridge, mask);
    for (int k = 0; k < 30 && !(next_dev <= dev + 1e-12 * std::abs(dev)); ++k) {
      scale *= 0.5;
      next = beta + scale * step;
      next_dev = penalised_deviance(d, next, options.ridge, mask);
    }

    const double change = dev - next_dev;
    beta = next;
    dev = next_dev;
    fit.n_iterations = iter;
    fit.last_deviance_change = change;

    if (beta.cwiseAbs().maxCoeff() > options.divergence_bound) {
      throw Error(ErrorCode::Separation,
                  fmt::format("|coefficient| exceeded {} at iteration {}",
                              options.divergence_bound, iter));
    }
    if (std::abs(change) < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) {
    throw Error(ErrorCode::NotConverged,
                fmt::format("no convergence within {} iterations", options.max_iterations));
  }

  const Eigen::VectorXd mu = probabilities(d, beta);
  if ((d.y - mu).cwiseAbs().maxCoeff() < 1e-6) {
    throw Error(ErrorCode::Separation, "fitted probabilities reproduce the labels exactly");
  }
  const Eigen::MatrixXd cov = hessian(d, mu, options.ridge, mask).inverse();

  fit.coefficients.assign(beta.data(), beta.data() + p);
  fit.std_errors.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.std_errors[static_cast<std::size_t>(j)] = std::sqrt(cov(j, j));
  }
  fit.final_deviance = -2.0 * log_likelihood(d, beta);
  return fit;
}

double predict_proba(const LogisticFit& fit, const CaseRecord& c) {
  return logistic(fit.linear_predictor(c));
}

std::vector<double> predict_proba(const LogisticFit& fit, const Cohort& cohort) {
  std::vector<double> out;
  out.reserve(cohort.size());
  for (const auto& c : cohort.cases()) out.push_back(predict_proba(fit, c));
  return out;
}

std::string fit_to_json(const LogisticFit& fit) {
  nlohmann::ordered_json j;
  j["model"] = "logistic";
  std::vector<std::string> names;
  for (auto f : fit.predictors) names.emplace_back(to_string(f));
  j["predictors"] = names;
  nlohmann::ordered_json coefs;
  coefs["intercept"] = fit.coefficients.at(0);
  for (std::size_t i = 0; i < fit.predictors.size(); ++i) {
    coefs[names[i]] = fit.coefficients.at(i + 1);
  }
  j["coefficients"] = coefs;
  nlohmann::ordered_json ses;
  ses["intercept"] = fit.std_errors.at(0);
  for (std::size_t i = 0; i < fit.predictors.size(); ++i) ses[names[i]] = fit.std_errors.at(i + 1);
  j["std_errors"] = ses;
  j["deviance"] = fit.final_deviance;
  j["last_deviance_change"] = fit.last_deviance_change;
  j["iterations"] = fit.n_iterations;
  j["converged"] = fit.converged;
  j["ridge"] = fit.ridge;
  j["n_observations"] = fit.n_observations;
  return j.dump(2) + "\n";
}

LogisticFit fit_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    LogisticFit fit;
    for (const auto& name : j.at("predictors")) {
      fit.predictors.push_back(parse_feature(name.get<std::string>()));
    }
    fit.coefficients.push_back(j.at("coefficients").at("intercept").get<double>());
    fit.std_errors.push_back(j.at("std_errors").at("intercept").get<double>());
    for (auto f : fit.predictors) {
      const std::string key(to_string(f));
      fit.coefficients.push_back(j.at("coefficients").at(key).get<double>());
      fit.std_errors.push_back(j.at("std_errors").at(key).get<double>());
    }
    fit.final_deviance = j.at("deviance").get<double>();
    fit.last_deviance_change = j.value("last_deviance_change", 0.0);
    fit.n_iterations = j.at("iterations").get<int>();
    fit.converged = j.at("converged").get<bool>();
    fit.ridge = j.value("ridge", 0.0);
    fit.n_observations = j.value("n_observations", std::size_t{0});
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedValue, std::string("fit JSON: ") + e.what());
  }
}

}  // namespace dxeval
