// dxeval command-line front end. Every subcommand reads the standard cohort
// CSV (or writes it, for synth) and maps library errors onto exit codes:
// 2 input, 3 statistical degeneracy, 4 internal.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dxeval/baseline.hpp"
#include "dxeval/calibration.hpp"
#include "dxeval/cohort.hpp"
#include "dxeval/csv.hpp"
#include "dxeval/curves.hpp"
#include "dxeval/dca.hpp"
#include "dxeval/error.hpp"
#include "dxeval/inference.hpp"
#include "dxeval/report.hpp"
#include "dxeval/synthcohort.hpp"
#include "dxeval/thresholds.hpp"

namespace fs = std::filesystem;
using dxeval::Error;
using dxeval::ErrorCode;
using dxeval::Json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInternal = 4;

struct ColumnFlags {
  std::string input;
  std::string id_col = "case_id";
  std::string label_col = "label";
  std::vector<std::string> score_cols;
  std::string pct_normal_col;
  std::string neut_col;
  std::string mono_col;
  std::string lymph_col;
  std::string siri_col;

  void attach(CLI::App* app, bool input_required = true) {
    auto* opt = app->add_option("--input", input, "Cohort CSV");
    if (input_required) opt->required();
    app->add_option("--id-col", id_col, "Case identifier column")->capture_default_str();
    app->add_option("--label-col", label_col, "Binary outcome column (0/1)")->capture_default_str();
    app->add_option("--score-col", score_cols, "Model probability column (repeatable)");
    app->add_option("--pct-normal-col", pct_normal_col, "% normal forms column");
    app->add_option("--neut-col", neut_col, "Neutrophil count column");
    app->add_option("--mono-col", mono_col, "Monocyte count column");
    app->add_option("--lymph-col", lymph_col, "Lymphocyte count column");
    app->add_option("--siri-col", siri_col, "Precomputed SIRI column");
  }

  dxeval::ColumnMapping mapping() const {
    dxeval::ColumnMapping m;
    m.case_id = id_col;
    m.label = label_col;
    auto set = [](std::optional<std::string>& field, const std::string& v) {
      if (!v.empty()) field = v;
    };
    set(m.pct_normal, pct_normal_col);
    set(m.neutrophils, neut_col);
    set(m.monocytes, mono_col);
    set(m.lymphocytes, lymph_col);
    set(m.siri, siri_col);
    m.scores = score_cols;
    return m;
  }

  // Unmapped header columns become score columns when none were named.
  dxeval::Cohort load(dxeval::CohortRole role = dxeval::CohortRole::Evaluate,
                      bool scores_from_leftovers = true) const {
    const auto header = dxeval::csv::read_header(input);
    auto m = dxeval::ColumnMapping::infer(header, mapping());
    if (m.scores.empty() && scores_from_leftovers) m.scores = dxeval::unmapped_columns(header, m);
    return dxeval::parse_cohort(input, m, role);
  }

  const std::string& single_score() const {
    if (score_cols.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "exactly one --score-col is required");
    }
    return score_cols.front();
  }
};

struct BootstrapFlags {
  std::size_t replicates = 1000;
  std::uint64_t seed = 42;
  std::string ci = "bca";
  std::size_t workers = 1;

  void attach(CLI::App* app, bool with_method = true) {
    app->add_option("--replicates", replicates, "Bootstrap replicates")->capture_default_str();
    app->add_option("--seed", seed, "Bootstrap seed")->capture_default_str();
    if (with_method) {
      app->add_option("--ci", ci, "Interval method")
          ->check(CLI::IsMember({"bca", "percentile"}))
          ->capture_default_str();
    }
    app->add_option("--workers", workers, "Worker threads (results do not depend on this)")
        ->capture_default_str();
  }

  dxeval::BootstrapOptions options() const {
    dxeval::BootstrapOptions o;
    o.replicates = replicates;
    o.seed = seed;
    o.method = dxeval::parse_ci_method(ci);
    o.workers = workers;
    return o;
  }
};

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

std::string sibling_svg(const std::string& csv_path) {
  fs::path p(csv_path);
  p.replace_extension(".svg");
  return p.string();
}

// "k=v,k=v" into a map; numbers are parsed by the caller.
std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "param '" + item + "' is not key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

class Params {
 public:
  explicit Params(const std::string& text) : kv_(parse_params(text)) {}

  double number(const std::string& key, double fallback) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.push_back(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedValue, "param " + key + " is not a number: " + it->second);
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw Error(ErrorCode::MalformedValue, "param " + key + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.push_back(key);
    return it->second;
  }

  void check_all_used() const {
    for (const auto& [k, v] : kv_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw Error(ErrorCode::InvalidArgument, "unknown param '" + k + "'");
      }
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string> used_;
};

std::vector<double> sample_scores(const dxeval::Cohort& cohort, const std::string& model,
                                  std::vector<int>& labels) {
  auto s = dxeval::scored_sample(cohort, model);
  labels = std::move(s.labels);
  return std::move(s.scores);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate and compare binary diagnostic classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dxeval::tool_version());

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort CSV");
  std::string synth_kind, synth_params, synth_out, synth_train_out;
  std::uint64_t synth_seed = 42;
  synth->add_option("kind", synth_kind, "binormal | calibrated | clinical | demo")
      ->required()
      ->check(CLI::IsMember({"binormal", "calibrated", "clinical", "demo"}));
  synth->add_option("--params", synth_params,
                    "Comma-separated key=value pairs, e.g. n_pos=500,n_neg=500,mu_pos=1");
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV (evaluation cohort for demo)")->required();
  synth->add_option("--train-out", synth_train_out, "Training cohort CSV (demo only)");

  // fit-baseline
  auto* fit = app.add_subcommand("fit-baseline", "Fit the WHO(+SIRI) logistic baseline");
  ColumnFlags fit_cols;
  std::string fit_train, fit_out;
  std::vector<std::string> fit_predictors{"pct_normal", "siri"};
  double fit_ridge = 0.0;
  fit->add_option("--train", fit_train, "Training cohort CSV")->required();
  fit_cols.attach(fit, false);
  fit->add_option("--predictor", fit_predictors, "pct_normal and/or siri")->capture_default_str();
  fit->add_option("--ridge", fit_ridge, "L2 penalty on slopes")->capture_default_str();
  fit->add_option("--out", fit_out, "fit.json")->required();

  // predict-baseline
  auto* predict = app.add_subcommand("predict-baseline", "Score a cohort with a fitted baseline");
  ColumnFlags pred_cols;
  std::string pred_fit, pred_out, pred_name = "who_siri";
  pred_cols.attach(predict);
  predict->add_option("--fit", pred_fit, "fit.json from fit-baseline")->required();
  predict->add_option("--name", pred_name, "Score column to add")->capture_default_str();
  predict->add_option("--out", pred_out, "Output cohort CSV")->required();

  // disjoint
  auto* disjoint = app.add_subcommand("disjoint", "Check two cohorts share no case_id");
  std::string disjoint_a, disjoint_b;
  disjoint->add_option("--train", disjoint_a, "First cohort CSV")->required();
  disjoint->add_option("--input", disjoint_b, "Second cohort CSV")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Metrics across a threshold grid");
  ColumnFlags sweep_cols;
  std::string sweep_grid = "0:0.5:0.1", sweep_out;
  sweep_cols.attach(sweep);
  sweep->add_option("--grid", sweep_grid, "lo:hi:step or comma list")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV (stdout when omitted)");

  // curves
  auto* curves = app.add_subcommand("curves", "ROC and PR curve points plus SVGs");
  ColumnFlags curve_cols;
  std::string curve_prefix = "curve_";
  curve_cols.attach(curves);
  curves->add_option("--out-prefix", curve_prefix, "Prefix for <prefix>roc.csv etc.")
      ->capture_default_str();

  // compare
  auto* compare = app.add_subcommand("compare", "AUC intervals and DeLong test for two models");
  ColumnFlags cmp_cols;
  BootstrapFlags cmp_boot;
  std::string cmp_mode, cmp_out;
  cmp_cols.attach(compare);
  cmp_boot.attach(compare);
  compare->add_option("--mode", cmp_mode, "paired | unpaired")
      ->required()
      ->check(CLI::IsMember({"paired", "unpaired"}));
  compare->add_option("--out", cmp_out, "Output JSON (stdout when omitted)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Reliability bins and ECE");
  ColumnFlags cal_cols;
  std::size_t cal_bins = 10;
  std::string cal_binning = "equal", cal_out;
  cal_cols.attach(calibrate);
  calibrate->add_option("--bins", cal_bins, "Number of bins")->capture_default_str();
  calibrate->add_option("--binning", cal_binning, "equal | quantile")
      ->check(CLI::IsMember({"equal", "quantile"}))
      ->capture_default_str();
  calibrate->add_option("--out", cal_out, "Output CSV; the SVG goes next to it")->required();

  // dca
  auto* dca = app.add_subcommand("dca", "Decision curve with bootstrap bands");
  ColumnFlags dca_cols;
  BootstrapFlags dca_boot;
  dca_boot.ci = "percentile";
  std::string dca_grid = "0.01:0.5:0.01", dca_out, dca_rule = "same_threshold";
  double dca_cutoff = 0.5;
  dca_cols.attach(dca);
  dca_boot.attach(dca);
  dca->add_option("--grid", dca_grid, "lo:hi:step or comma list")->capture_default_str();
  dca->add_option("--rule", dca_rule, "same_threshold | fixed_cutoff")
      ->check(CLI::IsMember({"same_threshold", "fixed_cutoff"}))
      ->capture_default_str();
  dca->add_option("--cutoff", dca_cutoff, "Cutoff for the fixed_cutoff rule")->capture_default_str();
  dca->add_option("--out", dca_out, "Output CSV; the SVG goes next to it")->required();

  // report
  auto* report = app.add_subcommand("report", "Full comparison run: summary.json, tables, figures");
  std::string rep_config, rep_train, rep_mode, rep_out_dir, rep_grid, rep_dca_grid;
  std::string rep_binning = "equal", rep_baseline_name = "who_siri";
  std::size_t rep_bins = 10;
  bool rep_timestamps = false;
  ColumnFlags rep_cols;
  BootstrapFlags rep_boot;
  report->add_option("--config", rep_config, "JSON run config");
  rep_cols.attach(report, false);
  rep_boot.attach(report);
  report->add_option("--train", rep_train, "Training CSV; fits the logistic baseline");
  report->add_option("--baseline-name", rep_baseline_name, "Score name for the baseline")
      ->capture_default_str();
  report->add_option("--mode", rep_mode, "paired | unpaired DeLong")
      ->check(CLI::IsMember({"paired", "unpaired"}));
  report->add_option("--grid", rep_grid, "Threshold grid");
  report->add_option("--dca-grid", rep_dca_grid, "DCA threshold grid");
  report->add_option("--bins", rep_bins, "Calibration bins")->capture_default_str();
  report->add_option("--binning", rep_binning, "equal | quantile")
      ->check(CLI::IsMember({"equal", "quantile"}));
  report->add_option("--out-dir", rep_out_dir,
                     fmt::format("Output directory (default ${} or dxeval_out)", dxeval::kOutputDirEnv));
  report->add_flag("--timestamps", rep_timestamps, "Record run times (output no longer byte-stable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*synth) {
      Params p(synth_params);
      if (synth_kind == "binormal") {
        dxeval::BinormalSpec s;
        s.n_pos = p.count("n_pos", s.n_pos);
        s.n_neg = p.count("n_neg", s.n_neg);
        s.mu_pos = p.number("mu_pos", s.mu_pos);
        s.mu_neg = p.number("mu_neg", s.mu_neg);
        s.sigma_pos = p.number("sigma_pos", s.sigma_pos);
        s.sigma_neg = p.number("sigma_neg", s.sigma_neg);
        s.score_name = p.text("score_name", s.score_name);
        s.seed = synth_seed;
        p.check_all_used();
        dxeval::write_cohort(synth_out, dxeval::generate_binormal(s));
      } else if (synth_kind == "calibrated") {
        dxeval::CalibratedSpec s;
        s.n = p.count("n", s.n);
        s.score_name = p.text("score_name", s.score_name);
        const std::string dist = p.text("dist", "uniform");
        if (dist == "uniform") {
          s.scores = dxeval::UniformScores{p.number("lo", 0.0), p.number("hi", 1.0)};
        } else if (dist == "constant") {
          s.scores = dxeval::ConstantScores{p.number("value", 0.5)};
        } else {
          throw Error(ErrorCode::InvalidSpec, "dist must be uniform or constant");
        }
        s.seed = synth_seed;
        p.check_all_used();
        dxeval::write_cohort(synth_out, dxeval::generate_calibrated(s));
      } else if (synth_kind == "clinical") {
        const std::size_t n = p.count("n", 1000);
        const std::array<double, 3> betas{p.number("b0", -4.0), p.number("b_pct", 0.5),
                                          p.number("b_siri", -0.8)};
        dxeval::FeatureDistributions f;
        const std::string prefix = p.text("id_prefix", "case");
        p.check_all_used();
        dxeval::write_cohort(synth_out, dxeval::generate_clinical(n, betas, f, synth_seed, prefix));
      } else {
        p.check_all_used();
        const auto demo = dxeval::generate_demo(synth_seed);
        dxeval::write_cohort(synth_out, demo.evaluate);
        if (!synth_train_out.empty()) dxeval::write_cohort(synth_train_out, demo.train);
      }
      return 0;
    }

    if (*fit) {
      ColumnFlags c = fit_cols;
      c.input = fit_train;
      const auto train = c.load(dxeval::CohortRole::Train, false);
      std::vector<dxeval::Feature> preds;
      for (const auto& name : fit_predictors) preds.push_back(dxeval::parse_feature(name));
      dxeval::FitOptions opt;
      opt.ridge = fit_ridge;
      write_file(fit_out, dxeval::fit_to_json(dxeval::fit_logistic(train, preds, opt)));
      return 0;
    }

    if (*predict) {
      std::ifstream in(pred_fit);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + pred_fit);
      std::stringstream buf;
      buf << in.rdbuf();
      const auto model = dxeval::fit_from_json(buf.str());
      const auto cohort = pred_cols.load();
      dxeval::write_cohort(pred_out,
                           dxeval::with_scores(cohort, pred_name, dxeval::predict_proba(model, cohort)));
      return 0;
    }

    if (*disjoint) {
      ColumnFlags a;
      a.input = disjoint_a;
      ColumnFlags b;
      b.input = disjoint_b;
      const auto shared = dxeval::check_disjoint(a.load(dxeval::CohortRole::Train, false),
                                                 b.load(dxeval::CohortRole::Evaluate, false));
      if (shared.empty()) {
        std::cout << "disjoint\n";
        return 0;
      }
      for (const auto& id : shared) std::cout << id << "\n";
      throw Error(ErrorCode::LeakageDetected, fmt::format("{} shared case_id(s)", shared.size()));
    }

    if (*sweep) {
      const auto cohort = sweep_cols.load();
      std::vector<int> labels;
      const auto scores = sample_scores(cohort, sweep_cols.single_score(), labels);
      const auto rows = dxeval::threshold_sweep(scores, labels, dxeval::parse_grid(sweep_grid));
      write_file(sweep_out, dxeval::sweep_csv(dxeval::to_json(rows)));
      return 0;
    }

    if (*curves) {
      const auto cohort = curve_cols.load();
      const std::string& model = curve_cols.single_score();
      std::vector<int> labels;
      const auto scores = sample_scores(cohort, model, labels);
      const Json roc = dxeval::to_json(dxeval::roc_curve(scores, labels));
      const Json pr = dxeval::to_json(dxeval::pr_curve(scores, labels));
      write_file(curve_prefix + "roc.csv", dxeval::curve_csv(roc));
      write_file(curve_prefix + "roc.svg", dxeval::roc_svg(roc, "ROC - " + model));
      write_file(curve_prefix + "pr.csv", dxeval::curve_csv(pr));
      write_file(curve_prefix + "pr.svg", dxeval::pr_svg(pr, "Precision-recall - " + model));
      std::cout << fmt::format("roc_auc={} pr_auc={}\n", dxeval::csv::format_double(roc.at("area").get<double>()),
                               dxeval::csv::format_double(pr.at("area").get<double>()));
      return 0;
    }

    if (*compare) {
      if (cmp_cols.score_cols.size() != 2) {
        throw Error(ErrorCode::InvalidArgument, "compare needs exactly two --score-col");
      }
      const auto cohort = cmp_cols.load();
      const auto& a = cmp_cols.score_cols[0];
      const auto& b = cmp_cols.score_cols[1];
      const auto mode = dxeval::parse_delong_mode(cmp_mode);
      const auto opts = cmp_boot.options();
      Json out;
      out["tool"] = {{"name", "dxeval"}, {"version", dxeval::tool_version()}};
      out["bootstrap"] = {{"replicates", opts.replicates},
                          {"seed", opts.seed},
                          {"method", std::string(dxeval::to_string(opts.method))}};
      Json models = Json::array();
      for (const auto& name : {a, b}) {
        const auto s = dxeval::scored_sample(cohort, name);
        Json m;
        m["name"] = name;
        m["n"] = s.scores.size();
        m["roc_auc"] = dxeval::to_json(dxeval::bootstrap_auc_ci(s.scores, s.labels, opts));
        m["roc_auc_delong"] = dxeval::to_json(dxeval::delong_interval(s.scores, s.labels));
        m["pr_auc"] = dxeval::to_json(dxeval::bootstrap_average_precision_ci(s.scores, s.labels, opts));
        models.push_back(m);
      }
      out["models"] = models;
      dxeval::DeLongResult r;
      if (mode == dxeval::DeLongMode::Paired) {
        const auto p = dxeval::paired_sample(cohort, a, b);
        r = dxeval::delong_compare(p.scores_a, p.scores_b, p.labels);
      } else {
        const auto sa = dxeval::scored_sample(cohort, a);
        const auto sb = dxeval::scored_sample(cohort, b);
        r = dxeval::delong_compare(sa.scores, sa.labels, sb.scores, sb.labels);
      }
      Json cmp = {{"model_a", a}, {"model_b", b}};
      cmp.update(dxeval::to_json(r));
      out["comparison"] = cmp;
      write_file(cmp_out, out.dump(2) + "\n");
      return 0;
    }

    if (*calibrate) {
      const auto cohort = cal_cols.load();
      const auto& model = cal_cols.single_score();
      std::vector<int> labels;
      const auto scores = sample_scores(cohort, model, labels);
      const auto bins = dxeval::reliability_curve(scores, labels, dxeval::parse_binning(cal_binning), cal_bins);
      const Json j = {{"bins", dxeval::to_json(bins)},
                      {"ece", dxeval::expected_calibration_error(bins)}};
      write_file(cal_out, dxeval::calibration_csv(j));
      write_file(sibling_svg(cal_out), dxeval::calibration_svg(j, "Calibration - " + model));
      std::cout << "ece=" << dxeval::csv::format_double(j.at("ece").get<double>()) << "\n";
      return 0;
    }

    if (*dca) {
      const auto cohort = dca_cols.load();
      const auto& model = dca_cols.single_score();
      std::vector<int> labels;
      const auto scores = sample_scores(cohort, model, labels);
      dxeval::DcaOptions opt;
      opt.rule = dca_rule == "same_threshold" ? dxeval::DecisionRule::SameThreshold
                                              : dxeval::DecisionRule::FixedCutoff;
      opt.fixed_cutoff = dca_cutoff;
      if (dca_boot.replicates > 0) opt.bootstrap = dca_boot.options();
      const auto grid = dxeval::parse_grid(dca_grid);
      const Json j = dxeval::to_json(dxeval::dca_curve(scores, labels, grid, opt));
      write_file(dca_out, dxeval::dca_csv(j));
      write_file(sibling_svg(dca_out), dxeval::dca_svg(j, "Decision curve - " + model));
      return 0;
    }

    if (*report) {
      dxeval::RunConfig config;
      if (!rep_config.empty()) {
        config = dxeval::load_run_config(rep_config);
      } else {
        if (rep_cols.input.empty()) throw Error(ErrorCode::InvalidArgument, "report needs --config or --input");
        config.input_path = rep_cols.input;
        config.columns = rep_cols.mapping();
        if (!rep_train.empty()) {
          dxeval::BaselineRequest b;
          b.train_path = rep_train;
          b.model_name = rep_baseline_name;
          config.baseline = b;
        }
        config.models = rep_cols.score_cols;
        if (config.models.empty()) {
          const auto header = dxeval::csv::read_header(config.input_path);
          config.models = dxeval::unmapped_columns(header, dxeval::ColumnMapping::infer(header, config.columns));
        }
        config.columns.scores = config.models;
        if (config.baseline) config.models.insert(config.models.begin(), config.baseline->model_name);
        config.replicates = rep_boot.replicates;
        config.seed = rep_boot.seed;
        config.ci_method = dxeval::parse_ci_method(rep_boot.ci);
        config.workers = rep_boot.workers;
        if (!rep_grid.empty()) config.threshold_grid = dxeval::parse_grid(rep_grid);
        if (!rep_dca_grid.empty()) config.dca_grid = dxeval::parse_grid(rep_dca_grid);
        config.calibration_bins = rep_bins;
        config.binning = dxeval::parse_binning(rep_binning);
        if (const char* env = std::getenv(dxeval::kOutputDirEnv); env && *env) config.output_dir = env;
        else config.output_dir = "dxeval_out";
      }
      if (!rep_mode.empty()) config.delong_mode = dxeval::parse_delong_mode(rep_mode);
      if (!rep_out_dir.empty()) config.output_dir = rep_out_dir;
      if (rep_timestamps) config.timestamps = true;
      const auto summary = dxeval::run_comparison(config);
      const auto tables = dxeval::render_tables(dxeval::to_json(summary));
      std::cout << tables.text;
      std::cout << "wrote " << config.output_dir.string() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "dxeval: " << e.what() << "\n";
    switch (e.category()) {
      case dxeval::ErrorCategory::Input: return kExitInput;
      case dxeval::ErrorCategory::Degenerate: return kExitDegenerate;
      case dxeval::ErrorCategory::Internal: return kExitInternal;
    }
  } catch (const std::exception& e) {
    std::cerr << "dxeval: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
