#include "dxeval/synthcohort.hpp"

#include <fmt/format.h>

#include <cmath>

#include "dxeval/baseline.hpp"
#include "dxeval/error.hpp"
#include "dxeval/inference.hpp"
#include "dxeval/random.hpp"

namespace dxeval {
namespace {

std::string case_id(const std::string& prefix, std::size_t i) {
  return fmt::format("{}_{:06d}", prefix, i + 1);
}

void check_range(const Range& r, double min_lo, bool strict, const char* what) {
  const bool lo_ok = strict ? r.lo > min_lo : r.lo >= min_lo;
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && lo_ok && r.lo <= r.hi)) {
    throw Error(ErrorCode::InvalidSpec, fmt::format("invalid {} range [{}, {}]", what, r.lo, r.hi));
  }
}

}  // namespace

double binormal_auc(const BinormalSpec& s) {
  return normal_cdf((s.mu_pos - s.mu_neg) /
                    std::sqrt(s.sigma_pos * s.sigma_pos + s.sigma_neg * s.sigma_neg));
}

double binormal_separation_for_auc(double auc) { return std::sqrt(2.0) * normal_quantile(auc); }

LatentSample binormal_latent(const BinormalSpec& s) {
  if (s.n_pos < 2 || s.n_neg < 2) {
    throw Error(ErrorCode::InvalidSpec, "binormal cohort needs at least two cases per class");
  }
  if (!(s.sigma_pos > 0.0 && s.sigma_neg > 0.0) || !std::isfinite(s.mu_pos) ||
      !std::isfinite(s.mu_neg)) {
    throw Error(ErrorCode::InvalidSpec, "binormal sigmas must be positive and means finite");
  }
  RandomStream rng(s.seed);
  LatentSample out;
  out.latent.reserve(s.n_pos + s.n_neg);
  for (std::size_t i = 0; i < s.n_pos; ++i) {
    out.latent.push_back(rng.normal(s.mu_pos, s.sigma_pos));
    out.labels.push_back(1);
  }
  for (std::size_t i = 0; i < s.n_neg; ++i) {
    out.latent.push_back(rng.normal(s.mu_neg, s.sigma_neg));
    out.labels.push_back(0);
  }
  return out;
}

Cohort generate_binormal(const BinormalSpec& s) {
  const LatentSample draw = binormal_latent(s);
  std::vector<CaseRecord> cases(draw.latent.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    cases[i].case_id = case_id("case", i);
    cases[i].label = draw.labels[i];
    cases[i].scores.emplace(s.score_name, logistic(draw.latent[i]));
  }
  return Cohort(std::move(cases));
}

Cohort attach_binormal_scores(const Cohort& cohort, const std::string& name, double mu_pos,
                              double mu_neg, double sigma_pos, double sigma_neg,
                              std::uint64_t seed) {
  if (!(sigma_pos > 0.0 && sigma_neg > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "binormal sigmas must be positive");
  }
  RandomStream rng(seed);
  std::vector<double> scores;
  scores.reserve(cohort.size());
  for (const auto& c : cohort.cases()) {
    const double latent = c.label == 1 ? rng.normal(mu_pos, sigma_pos) : rng.normal(mu_neg, sigma_neg);
    scores.push_back(logistic(latent));
  }
  return with_scores(cohort, name, scores);
}

Cohort generate_calibrated(const CalibratedSpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::InvalidSpec, "calibrated cohort needs n >= 1");
  if (const auto* u = std::get_if<UniformScores>(&spec.scores)) {
    if (!(u->lo >= 0.0 && u->hi <= 1.0 && u->lo <= u->hi)) {
      throw Error(ErrorCode::InvalidSpec, "uniform score range must lie within [0,1]");
    }
  } else if (const auto* c = std::get_if<ConstantScores>(&spec.scores)) {
    if (!(c->value >= 0.0 && c->value <= 1.0)) {
      throw Error(ErrorCode::InvalidSpec, "constant score must lie within [0,1]");
    }
  }
  RandomStream rng(spec.seed);
  std::vector<CaseRecord> cases(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double score = std::visit(
        [&](const auto& d) -> double {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, UniformScores>) {
            return rng.uniform(d.lo, d.hi);
          } else {
            return d.value;
          }
        },
        spec.scores);
    cases[i].case_id = case_id("case", i);
    cases[i].label = rng.bernoulli(score) ? 1 : 0;
    cases[i].scores.emplace(spec.score_name, score);
  }
  return Cohort(std::move(cases));
}

Cohort generate_clinical(std::size_t n, const std::array<double, 3>& betas,
                         const FeatureDistributions& f, std::uint64_t seed,
                         const std::string& id_prefix) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "clinical cohort needs n >= 1");
  check_range(f.pct_normal, 0.0, false, "pct_normal");
  if (f.pct_normal.hi > 100.0) throw Error(ErrorCode::InvalidSpec, "pct_normal above 100");
  check_range(f.neutrophils, 0.0, true, "neutrophils");
  check_range(f.monocytes, 0.0, false, "monocytes");
  check_range(f.lymphocytes, 0.0, true, "lymphocytes");
  for (double b : betas) {
    if (!std::isfinite(b)) throw Error(ErrorCode::InvalidSpec, "coefficients must be finite");
  }

  RandomStream rng(seed);
  std::vector<CaseRecord> cases(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = cases[i];
    c.case_id = case_id(id_prefix, i);
    c.pct_normal = rng.uniform(f.pct_normal.lo, f.pct_normal.hi);
    c.blood = BloodPanel{rng.uniform(f.neutrophils.lo, f.neutrophils.hi),
                         rng.uniform(f.monocytes.lo, f.monocytes.hi),
                         rng.uniform(f.lymphocytes.lo, f.lymphocytes.hi)};
    const double eta = betas[0] + betas[1] * *c.pct_normal + betas[2] * compute_siri(*c.blood);
    c.label = rng.bernoulli(logistic(eta)) ? 1 : 0;
  }
  return Cohort(std::move(cases));
}

DemoInputs generate_demo(std::uint64_t seed) {
  // low-prevalence clinical population; coefficients pick a ~5% positive rate
  const std::array<double, 3> betas{-5.0, 0.3, -0.6};
  const FeatureDistributions features;
  DemoInputs demo;
  const Cohort train = generate_clinical(1500, betas, features, seed, "train");
  demo.train = Cohort(std::vector<CaseRecord>(train.cases().begin(), train.cases().end()),
                      CohortRole::Train);
  const Cohort eval = generate_clinical(719, betas, features, seed + 1, "eval");
  demo.evaluate = attach_binormal_scores(eval, "cnn", 3.0, -1.0, 1.0, 1.0, seed + 2);
  return demo;
}

}  // namespace dxeval
