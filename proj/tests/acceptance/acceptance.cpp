// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// fails. Reference values are either fixed golden strings or come
// from the oracles in tests/support.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dxeval/baseline.hpp"
#include "dxeval/calibration.hpp"
#include "dxeval/curves.hpp"
#include "dxeval/dca.hpp"
#include "dxeval/error.hpp"
#include "dxeval/inference.hpp"
#include "dxeval/report.hpp"
#include "dxeval/synthcohort.hpp"
#include "dxeval/thresholds.hpp"
#include "oracles.hpp"

using namespace dxeval;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << fmt::format("{} criterion {:>2}: {} ({:.2f}s)\n", o.pass ? "PASS" : "FAIL", id, title, secs);
  for (const auto& n : o.notes) std::cout << "      " << n << "\n";
  if (!o.pass) ++failures;
}

Json sweep_row_json(const ConfusionCounts& c) { return to_json(SweepRow{c, metrics_from(c)}); }

void expect_row(Outcome& o, const ConfusionCounts& c, const std::vector<std::string>& want) {
  const auto got = threshold_row_cells(sweep_row_json(c));
  // cells: threshold, sens, spec, ppv, npv, f1, flagged
  for (std::size_t k = 0; k < want.size(); ++k) {
    o.expect(got[k + 1] == want[k], fmt::format("cell {} = '{}' (want '{}')", k + 1, got[k + 1], want[k]));
  }
  o.note("rendered: " + fmt::format("{}", fmt::join(got, " | ")));
}

LatentSample binormal(std::size_t n_pos, std::size_t n_neg, double delta, std::uint64_t seed) {
  BinormalSpec s;
  s.n_pos = n_pos;
  s.n_neg = n_neg;
  s.mu_pos = delta;
  s.seed = seed;
  return binormal_latent(s);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path demo_config = argc > 1 ? fs::path(argv[1]) : fs::path(DXEVAL_DEMO_CONFIG);
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "dxeval_acceptance";

  criterion(1, "golden metrics, WHO baseline at t=0.1", [](Outcome& o) {
    expect_row(o, {2, 12, 678, 27, 0.1}, {"0.07", "0.983", "0.143", "0.962", "0.09", "1.9%"});
  });

  criterion(2, "golden metrics, CNN at t=0.4/0.5 and WHO F1 at t=0", [](Outcome& o) {
    expect_row(o, {24, 1, 7, 1, 0.4}, {"0.96", "0.875", "0.960", "0.875", "0.96", "75.8%"});
    const auto who0 = metrics_from({29, 690, 0, 0, 0.0});
    o.expect(*who0.f1 == 58.0 / 748.0, "F1 equals 58/748");
    o.expect(format_fixed(who0.f1, 2) == "0.08", "F1 renders 0.08");
    o.note(fmt::format("WHO t=0 F1 = {} -> {}", *who0.f1, format_fixed(who0.f1, 2)));
  });

  criterion(3, "AUC and PR-area oracles on 200 random instances (N <= 12)", [](Outcome& o) {
    std::mt19937_64 rng(20240601);
    int auc_ok = 0, ap_ok = 0;
    for (int k = 0; k < 200; ++k) {
      const auto inst = oracle::tiny_instance(rng, 12);
      auc_ok += roc_auc(inst.scores, inst.labels) == oracle::pair_count_auc(inst.scores, inst.labels);
      const double ap = average_precision(inst.scores, inst.labels);
      const double exact = oracle::ranked_walk_ap_exact(inst.scores, inst.labels).value();
      ap_ok += ap == oracle::ranked_walk_ap(inst.scores, inst.labels) && std::abs(ap - exact) <= 1e-15;
    }
    o.expect(auc_ok == 200, fmt::format("ROC AUC exact on {}/200", auc_ok));
    o.expect(ap_ok == 200, fmt::format("average precision exact on {}/200", ap_ok));
    o.note(fmt::format("ROC exact {}/200, AP exact {}/200", auc_ok, ap_ok));
  });

  criterion(4, "binormal recovery, delta=1, 10,000 per class, 5 seeds", [](Outcome& o) {
    const double truth = oracle::binormal_auc(1.0);
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
      const auto d = binormal(10000, 10000, 1.0, seed);
      const double a = roc_auc(d.latent, d.labels);
      o.expect(std::abs(a - truth) <= 0.01, fmt::format("seed {} AUC {:.5f}", seed, a));
      o.note(fmt::format("seed {}: AUC {:.5f} (truth {:.5f})", seed, a, truth));
    }
  });

  criterion(5, "DeLong vs BCa bootstrap SE, and DeLong type-I error", [](Outcome& o) {
    const double delta = binormal_separation_for_auc(0.8);
    o.expect(std::abs(oracle::binormal_auc(delta) - 0.8) < 1e-12, "separation gives true AUC 0.8");
    for (std::uint64_t seed : {11, 12, 13, 14, 15}) {
      const auto d = binormal(150, 350, delta, seed);
      BootstrapOptions b;
      b.replicates = 1000;
      b.seed = 42;
      b.method = CiMethod::Bca;
      const double boot_se = bootstrap_auc_ci(d.latent, d.labels, b).std_error;
      const double delong_se = std::sqrt(delong_variance(d.latent, d.labels).variance);
      const double rel = std::abs(boot_se - delong_se) / delong_se;
      o.expect(rel <= 0.15, fmt::format("seed {} relative SE gap {:.3f}", seed, rel));
      o.note(fmt::format("seed {}: DeLong SE {:.5f}, bootstrap SE {:.5f}, gap {:.1f}%", seed, delong_se,
                         boot_se, 100.0 * rel));
    }
    const int trials = 1000;
    int paired_rejections = 0, unpaired_rejections = 0;
    for (int t = 0; t < trials; ++t) {
      // two models drawn from the same generator, scored on the same cases
      const auto a = binormal(150, 350, delta, 100000 + 2 * t);
      const auto b = binormal(150, 350, delta, 100001 + 2 * t);
      paired_rejections += delong_compare(a.latent, b.latent, a.labels).p_two_sided < 0.05;
      // and on independent cohorts
      unpaired_rejections += delong_compare(a.latent, a.labels, b.latent, b.labels).p_two_sided < 0.05;
    }
    const double paired = paired_rejections / static_cast<double>(trials);
    const double unpaired = unpaired_rejections / static_cast<double>(trials);
    o.expect(std::abs(paired - 0.05) <= 0.02, fmt::format("paired type-I {:.3f}", paired));
    o.expect(std::abs(unpaired - 0.05) <= 0.02, fmt::format("unpaired type-I {:.3f}", unpaired));
    o.note(fmt::format("type-I error over {} trials: paired {:.3f}, unpaired {:.3f}", trials, paired, unpaired));
  });

  criterion(6, "bootstrap determinism: seed 42 twice, 1 vs 8 workers", [](Outcome& o) {
    const auto d = binormal(150, 350, binormal_separation_for_auc(0.8), 6);
    for (auto method : {CiMethod::Bca, CiMethod::Percentile}) {
      BootstrapOptions b;
      b.seed = 42;
      b.method = method;
      const auto first = bootstrap_auc_ci(d.latent, d.labels, b);
      const auto second = bootstrap_auc_ci(d.latent, d.labels, b);
      const auto ap1 = bootstrap_average_precision_ci(d.latent, d.labels, b);
      b.workers = 8;
      const auto eight = bootstrap_auc_ci(d.latent, d.labels, b);
      const auto ap8 = bootstrap_average_precision_ci(d.latent, d.labels, b);
      auto same = [](const IntervalEstimate& x, const IntervalEstimate& y) {
        return x.point == y.point && x.lo == y.lo && x.hi == y.hi && x.std_error == y.std_error;
      };
      const std::string m(to_string(method));
      o.expect(same(first, second), m + " AUC repeat identical");
      o.expect(same(first, eight), m + " AUC 1 vs 8 workers identical");
      o.expect(same(ap1, ap8), m + " AP 1 vs 8 workers identical");
      o.note(fmt::format("{}: [{}, {}] with 1 and 8 workers", m, first.lo, first.hi));
    }
  });

  criterion(7, "logistic recovery, beta=(-4, 0.5, -0.8), n=20,000", [](Outcome& o) {
    const std::array<double, 3> truth{-4.0, 0.5, -0.8};
    const auto train = generate_clinical(20000, truth, FeatureDistributions{}, 7);
    const std::vector<Feature> preds{Feature::PctNormal, Feature::Siri};
    const auto fit = fit_logistic(train, preds);
    for (int k = 0; k < 3; ++k) {
      o.expect(std::abs(fit.coefficients[k] - truth[k]) <= 0.1,
               fmt::format("beta[{}] = {:.4f}", k, fit.coefficients[k]));
    }
    o.note(fmt::format("fitted ({:.4f}, {:.4f}, {:.4f}) in {} iterations", fit.coefficients[0],
                       fit.coefficients[1], fit.coefficients[2], fit.n_iterations));

    const auto d = build_design(train, preds);
    const double score_max =
        score_vector(d, Eigen::Map<const Eigen::VectorXd>(fit.coefficients.data(), 3)).cwiseAbs().maxCoeff();
    o.expect(score_max <= 1e-6, fmt::format("score at optimum {:.3g}", score_max));

    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
      x.push_back({d.x(i, 1), d.x(i, 2)});
      y.push_back(static_cast<int>(d.y(i)));
    }
    std::vector<double> probe(truth.begin(), truth.end());
    probe[0] += 0.3;  // off the optimum so the gradient is not ~0
    const auto fd = oracle::fd_gradient(
        [&](const std::vector<double>& b) { return oracle::logistic_loglik(x, y, b); }, probe);
    const Eigen::VectorXd g = score_vector(d, Eigen::Map<const Eigen::VectorXd>(probe.data(), 3));
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(g(k) - fd[k]) / std::abs(fd[k]));
    o.expect(worst <= 1e-4, fmt::format("finite-difference relative gap {:.3g}", worst));
    o.note(fmt::format("|score| at optimum {:.3g}; FD gradient relative gap {:.3g}", score_max, worst));
  });

  criterion(8, "calibration: uniform generator ECE, constructed bins", [](Outcome& o) {
    CalibratedSpec s;
    s.n = 50000;
    s.scores = UniformScores{0.0, 1.0};
    s.seed = 8;
    const auto c = generate_calibrated(s);
    const auto sample = scored_sample(c, s.score_name);
    const double ece = expected_calibration_error(
        reliability_curve(sample.scores, sample.labels, Binning::EqualWidth, 10));
    o.expect(ece <= 0.02, fmt::format("uniform ECE {:.4f}", ece));

    // bin k holds 20 cases all scored at its midpoint, with exactly that share positive
    std::vector<double> scores;
    std::vector<int> labels;
    for (int k = 0; k < 10; ++k) {
      const double p = (2 * k + 1) / 20.0;  // 0.05, 0.15, ...
      for (int i = 0; i < 20; ++i) {
        scores.push_back(p);
        labels.push_back(i < 2 * k + 1);  // exactly p * 20 positives
      }
    }
    const double perfect = expected_calibration_error(reliability_curve(scores, labels, Binning::EqualWidth, 10));
    o.expect(perfect == 0.0, fmt::format("constructed ECE {}", perfect));
    o.note(fmt::format("uniform n=50,000 ECE {:.4f}; constructed ECE {}", ece, perfect));
  });

  criterion(9, "decision-curve identities", [](Outcome& o) {
    const auto d = binormal(150, 350, 1.0, 9);
    std::vector<double> scores;
    for (double v : d.latent) scores.push_back(logistic(v));
    const double prev = 150.0 / 500.0;

    double lo = 1e-9, hi = 1.0 - 1e-9;  // treat-all is decreasing in t
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (treat_all_net_benefit(prev, mid) > 0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    o.expect(std::abs(root - prev) < 1e-12, fmt::format("treat-all root {:.15f}", root));
    o.expect(std::abs(treat_all_net_benefit(prev, prev)) < 1e-12, "treat-all is zero at prevalence");

    const auto grid = default_dca_grid();
    std::vector<double> perfect(d.labels.begin(), d.labels.end());
    const auto flat = dca_curve(perfect, d.labels, grid);
    double worst_flat = 0.0;
    for (double nb : flat.model_nb) worst_flat = std::max(worst_flat, std::abs(nb - prev));
    o.expect(worst_flat < 1e-12, fmt::format("perfect classifier deviates {:.3g}", worst_flat));

    const auto curve = dca_curve(scores, d.labels, grid);
    double worst = 0.0;
    const double n = static_cast<double>(scores.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto c = confusion_at(scores, d.labels, grid[i]);
      const double direct = net_benefit(c, grid[i]);
      const auto e = oracle::enumerate_confusion(scores, d.labels, grid[i]);
      const double by_hand = e.tp / n - e.fp / n * grid[i] / (1.0 - grid[i]);
      worst = std::max({worst, std::abs(curve.model_nb[i] - direct), std::abs(curve.model_nb[i] - by_hand)});
    }
    o.expect(worst < 1e-12, fmt::format("curve vs confusion counts {:.3g}", worst));
    o.note(fmt::format("root error {:.3g}; flat deviation {:.3g}; grid disagreement {:.3g} over {} points",
                       std::abs(root - prev), worst_flat, worst, grid.size()));
  });

  criterion(10, "report determinism and table formatting on the bundled demo", [&](Outcome& o) {
    RunConfig config = load_run_config(demo_config);
    fs::remove_all(scratch);
    config.output_dir = scratch / "first";
    run_comparison(config);
    config.output_dir = scratch / "second";
    run_comparison(config);
    // the echoed output_dir is the only intended difference
    auto normalise = [](std::string s, const std::string& dir) {
      for (auto pos = s.find(dir); pos != std::string::npos; pos = s.find(dir)) s.replace(pos, dir.size(), "OUT");
      return s;
    };
    const std::string a = normalise(slurp(scratch / "first" / "summary.json"), (scratch / "first").generic_string());
    const std::string b = normalise(slurp(scratch / "second" / "summary.json"), (scratch / "second").generic_string());
    o.expect(!a.empty() && a == b, "summary.json byte-identical across runs");
    for (const char* f : {"table1_performance.csv", "table2_thresholds.csv", "table3_confusion.csv", "table4_auc.csv"}) {
      o.expect(slurp(scratch / "first" / f) == slurp(scratch / "second" / f), std::string(f) + " identical");
    }
    const std::string tables = slurp(scratch / "first" / "tables.txt");
    o.expect(tables.find("--") != std::string::npos, "undefined cells render as --");

    const auto ppv_undefined = threshold_row_cells(sweep_row_json({0, 0, 690, 29, 0.5}));
    o.expect(ppv_undefined[3] == "--", "PPV with nothing flagged renders --");
    const auto who = threshold_row_cells(sweep_row_json({2, 12, 678, 27, 0.1}));
    const auto cnn = threshold_row_cells(sweep_row_json({24, 1, 7, 1, 0.4}));
    o.expect(fmt::format("{}", fmt::join(who, "|")) == "0.1|0.07|0.983|0.143|0.962|0.09|1.9%", "WHO row");
    o.expect(fmt::format("{}", fmt::join(cnn, "|")) == "0.4|0.96|0.875|0.960|0.875|0.96|75.8%", "CNN row");
    o.note(fmt::format("summary.json {} bytes, identical across runs", a.size()));
  });

  std::cout << fmt::format("{} of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
