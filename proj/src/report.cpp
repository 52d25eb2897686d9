#include "dxeval/report.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <numeric>
#include <limits>
#include <sstream>

#include "dxeval/csv.hpp"
#include "dxeval/error.hpp"
#include "dxeval/svg.hpp"

namespace dxeval {
namespace fs = std::filesystem;

namespace {

constexpr const char* kPrIntegrator = "average_precision_step";
constexpr const char* kClassificationRule = "score >= threshold";
constexpr std::size_t kHistogramBins = 20;

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> number_or_none(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json threshold_json(double t) { return std::isfinite(t) ? Json(t) : Json(nullptr); }

std::string now_utc() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

// Stage wrapper: module errors come back annotated with the pipeline stage.
template <typename F>
auto in_stage(std::string_view stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    rethrow_in_stage(e, stage);
  }
}

std::string file_stem(const std::string& model) {
  std::string s;
  for (char c : model) {
    s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return s.empty() ? "model" : s;
}

std::string csv_text(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) csv::write_row(out, r);
  return out.str();
}

std::string full(const Json& v) {
  if (v.is_null()) return "--";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  return csv::format_double(v.get<double>());
}

std::string format_threshold(double t) {
  const double tenths = t * 10.0;
  if (std::abs(tenths - std::round(tenths)) < 1e-9) return fmt::format("{:.1f}", t);
  return csv::format_double(t);
}

std::string interval_cell(const Json& e) {
  return fmt::format("{:.3f} [{:.3f}, {:.3f}]", e.at("point").get<double>(),
                     e.at("lo").get<double>(), e.at("hi").get<double>());
}

std::string bracket(const Json& e) {
  return fmt::format("[{:.3f}, {:.3f}]", e.at("lo").get<double>(), e.at("hi").get<double>());
}

ColumnMapping mapping_from_json(const Json& j) {
  ColumnMapping m;
  if (j.is_null()) return m;
  m.case_id = j.value("case_id", m.case_id);
  m.label = j.value("label", m.label);
  auto opt = [&](const char* key, std::optional<std::string>& field) {
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<std::string>();
  };
  opt("pct_normal", m.pct_normal);
  opt("neutrophils", m.neutrophils);
  opt("monocytes", m.monocytes);
  opt("lymphocytes", m.lymphocytes);
  opt("siri", m.siri);
  if (j.contains("scores")) m.scores = j.at("scores").get<std::vector<std::string>>();
  return m;
}

Json mapping_to_json(const ColumnMapping& m) {
  Json j;
  j["case_id"] = m.case_id;
  j["label"] = m.label;
  auto opt = [&](const char* key, const std::optional<std::string>& field) {
    j[key] = field ? Json(*field) : Json(nullptr);
  };
  opt("pct_normal", m.pct_normal);
  opt("neutrophils", m.neutrophils);
  opt("monocytes", m.monocytes);
  opt("lymphocytes", m.lymphocytes);
  opt("siri", m.siri);
  j["scores"] = m.scores;
  return j;
}

std::vector<double> grid_from_json(const Json& j) {
  if (j.is_string()) return parse_grid(j.get<std::string>());
  return j.get<std::vector<double>>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ScoreHistogram histogram_of(std::span<const double> scores, std::span<const int> labels) {
  ScoreHistogram h;
  for (std::size_t k = 0; k <= kHistogramBins; ++k) {
    h.edges.push_back(static_cast<double>(k) / static_cast<double>(kHistogramBins));
  }
  h.positives.assign(kHistogramBins, 0);
  h.negatives.assign(kHistogramBins, 0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto b = static_cast<std::size_t>(std::upper_bound(h.edges.begin(), h.edges.end(), scores[i]) -
                                      h.edges.begin());
    b = b == 0 ? 0 : std::min(b - 1, kHistogramBins - 1);
    (labels[i] == 1 ? h.positives : h.negatives)[b] += 1;
  }
  return h;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::string tool_version() {
#ifdef DXEVAL_VERSION
  return DXEVAL_VERSION;
#else
  return "0.0.0";
#endif
}

// ---------------------------------------------------------------- config

RunConfig run_config_from_json(const Json& j, const fs::path& base_dir) {
  try {
    RunConfig c;
    c.input_path = resolve(base_dir, j.at("input").get<std::string>());
    if (j.contains("columns")) c.columns = mapping_from_json(j.at("columns"));
    if (j.contains("models")) c.models = j.at("models").get<std::vector<std::string>>();
    if (j.contains("baseline") && !j.at("baseline").is_null()) {
      const Json& b = j.at("baseline");
      BaselineRequest req;
      req.train_path = resolve(base_dir, b.at("train").get<std::string>());
      if (b.contains("columns")) req.columns = mapping_from_json(b.at("columns"));
      if (b.contains("predictors")) {
        req.predictors.clear();
        for (const auto& p : b.at("predictors")) req.predictors.push_back(parse_feature(p.get<std::string>()));
      }
      req.model_name = b.value("name", req.model_name);
      req.ridge = b.value("ridge", 0.0);
      c.baseline = req;
    }
    if (j.contains("thresholds")) c.threshold_grid = grid_from_json(j.at("thresholds"));
    if (j.contains("bootstrap")) {
      const Json& b = j.at("bootstrap");
      c.replicates = b.value("replicates", c.replicates);
      c.seed = b.value("seed", c.seed);
      if (b.contains("method")) c.ci_method = parse_ci_method(b.at("method").get<std::string>());
      c.workers = b.value("workers", c.workers);
    }
    if (j.contains("calibration")) {
      const Json& b = j.at("calibration");
      c.calibration_bins = b.value("bins", c.calibration_bins);
      if (b.contains("binning")) c.binning = parse_binning(b.at("binning").get<std::string>());
    }
    if (j.contains("dca")) {
      const Json& d = j.at("dca");
      if (d.contains("grid")) c.dca_grid = grid_from_json(d.at("grid"));
      if (d.contains("band_method")) c.dca_band_method = parse_ci_method(d.at("band_method").get<std::string>());
      if (d.contains("rule")) {
        const auto rule = d.at("rule").get<std::string>();
        if (rule == "same_threshold") {
          c.dca_rule = DecisionRule::SameThreshold;
        } else if (rule == "fixed_cutoff") {
          c.dca_rule = DecisionRule::FixedCutoff;
        } else {
          throw Error(ErrorCode::InvalidArgument, "dca.rule must be same_threshold or fixed_cutoff");
        }
      }
      c.dca_fixed_cutoff = d.value("fixed_cutoff", c.dca_fixed_cutoff);
    }
    if (j.contains("delong_mode") && !j.at("delong_mode").is_null()) {
      c.delong_mode = parse_delong_mode(j.at("delong_mode").get<std::string>());
    }
    if (j.contains("output_dir")) {
      c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
      c.output_dir = env;
    } else {
      c.output_dir = resolve(base_dir, "dxeval_out");
    }
    c.timestamps = j.value("timestamps", false);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedValue, std::string("run config: ") + e.what());
  }
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedValue, std::string("run config: ") + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

Json to_json(const RunConfig& c) {
  Json j;
  j["input"] = c.input_path.generic_string();
  j["columns"] = mapping_to_json(c.columns);
  j["models"] = c.models;
  if (c.baseline) {
    Json b;
    b["train"] = c.baseline->train_path.generic_string();
    b["columns"] = mapping_to_json(c.baseline->columns);
    std::vector<std::string> preds;
    for (auto f : c.baseline->predictors) preds.emplace_back(to_string(f));
    b["predictors"] = preds;
    b["name"] = c.baseline->model_name;
    b["ridge"] = c.baseline->ridge;
    j["baseline"] = b;
  } else {
    j["baseline"] = nullptr;
  }
  j["thresholds"] = c.threshold_grid;
  j["bootstrap"] = {{"replicates", c.replicates},
                    {"seed", c.seed},
                    {"method", std::string(to_string(c.ci_method))},
                    {"workers", c.workers}};
  j["calibration"] = {{"bins", c.calibration_bins}, {"binning", std::string(to_string(c.binning))}};
  j["dca"] = {{"grid", c.dca_grid},
              {"band_method", std::string(to_string(c.dca_band_method))},
              {"rule", c.dca_rule == DecisionRule::SameThreshold ? "same_threshold" : "fixed_cutoff"},
              {"fixed_cutoff", c.dca_fixed_cutoff}};
  j["delong_mode"] = c.delong_mode ? Json(std::string(to_string(*c.delong_mode))) : Json(nullptr);
  j["output_dir"] = c.output_dir.generic_string();
  j["timestamps"] = c.timestamps;
  return j;
}

// ---------------------------------------------------------------- analysis

ModelReport analyse_model(const Cohort& cohort, const std::string& model, const RunConfig& config) {
  const std::string stage = fmt::format("model '{}'", model);
  const ScoredSample sample = in_stage(stage, [&] { return scored_sample(cohort, model); });

  ModelReport m;
  m.name = model;
  m.n = sample.size();
  m.n_positive = static_cast<std::size_t>(std::count(sample.labels.begin(), sample.labels.end(), 1));
  m.prevalence = static_cast<double>(m.n_positive) / static_cast<double>(m.n);

  BootstrapOptions boot;
  boot.replicates = config.replicates;
  boot.seed = config.seed;
  boot.method = config.ci_method;
  boot.workers = config.workers;

  in_stage(stage + " / discrimination", [&] {
    m.roc = roc_curve(sample.scores, sample.labels);
    m.pr = pr_curve(sample.scores, sample.labels);
    m.roc_auc_delong = delong_interval(sample.scores, sample.labels);
  });
  in_stage(stage + " / bootstrap", [&] {
    m.roc_auc = bootstrap_auc_ci(sample.scores, sample.labels, boot);
    m.pr_auc = bootstrap_average_precision_ci(sample.scores, sample.labels, boot);
  });
  in_stage(stage + " / thresholds", [&] {
    const auto zero = confusion_at(sample.scores, sample.labels, 0.0);
    m.at_zero = {zero, metrics_from(zero)};
    m.sweep = threshold_sweep(sample.scores, sample.labels, config.threshold_grid);
    if (!m.sweep.empty()) {
      try {
        m.best_f1 = best_f1_operating_point(m.sweep);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AllUndefined) throw;
      }
    }
  });
  in_stage(stage + " / calibration", [&] {
    m.calibration = reliability_curve(sample.scores, sample.labels, config.binning,
                                      config.calibration_bins);
    m.ece = expected_calibration_error(m.calibration);
  });
  in_stage(stage + " / decision curve", [&] {
    DcaOptions dca;
    dca.rule = config.dca_rule;
    dca.fixed_cutoff = config.dca_fixed_cutoff;
    BootstrapOptions bands = boot;
    bands.method = config.dca_band_method;
    dca.bootstrap = bands;
    m.dca = dca_curve(sample.scores, sample.labels, config.dca_grid, dca);
  });
  m.histogram = histogram_of(sample.scores, sample.labels);
  return m;
}

RunSummary run_comparison(const Cohort& evaluate_in, const std::optional<Cohort>& train,
                          const RunConfig& config) {
  RunSummary s;
  s.config = config;
  if (config.timestamps) s.started_at = now_utc();

  Cohort evaluate = evaluate_in;
  std::vector<std::string> models = config.models;
  if (config.baseline) {
    if (!train) throw Error(ErrorCode::InvalidArgument, "baseline requested without a training cohort");
    in_stage("leakage check", [&] {
      const auto shared = check_disjoint(*train, evaluate);
      if (!shared.empty()) {
        throw Error(ErrorCode::LeakageDetected,
                    fmt::format("{} case_id(s) appear in both training and evaluation cohorts, "
                                "first '{}'",
                                shared.size(), shared.front()));
      }
    });
    s.baseline = in_stage("fit baseline", [&] {
      FitOptions opt;
      opt.ridge = config.baseline->ridge;
      return fit_logistic(*train, config.baseline->predictors, opt);
    });
    evaluate = in_stage("score baseline", [&] {
      return with_scores(evaluate, config.baseline->model_name, predict_proba(*s.baseline, evaluate));
    });
    if (std::find(models.begin(), models.end(), config.baseline->model_name) == models.end()) {
      models.insert(models.begin(), config.baseline->model_name);
    }
  }
  if (models.empty()) throw Error(ErrorCode::InvalidArgument, "no models to evaluate");
  if (models.size() >= 2 && !config.delong_mode) {
    throw Error(ErrorCode::InvalidArgument, "delong_mode (paired|unpaired) must be set explicitly");
  }
  s.cohort_size = evaluate.size();
  s.cohort_positives = evaluate.positives();

  std::vector<std::future<ModelReport>> pending;
  for (const auto& name : models) {
    pending.push_back(std::async(std::launch::async, [&evaluate, &config, name] {
      return analyse_model(evaluate, name, config);
    }));
  }
  for (auto& f : pending) s.models.push_back(f.get());

  for (std::size_t a = 0; a < models.size(); ++a) {
    for (std::size_t b = a + 1; b < models.size(); ++b) {
      Comparison cmp{models[a], models[b], {}};
      cmp.result = in_stage(fmt::format("compare '{}' vs '{}'", models[a], models[b]), [&] {
        if (*config.delong_mode == DeLongMode::Paired) {
          const PairedSample p = paired_sample(evaluate, models[a], models[b]);
          return delong_compare(p.scores_a, p.scores_b, p.labels);
        }
        const ScoredSample sa = scored_sample(evaluate, models[a]);
        const ScoredSample sb = scored_sample(evaluate, models[b]);
        return delong_compare(sa.scores, sa.labels, sb.scores, sb.labels);
      });
      s.comparisons.push_back(cmp);
    }
  }
  if (config.timestamps) s.finished_at = now_utc();
  return s;
}

RunSummary run_comparison(const RunConfig& config) {
  const Cohort evaluate = in_stage("parse input", [&] {
    ColumnMapping mapping = config.columns;
    if (mapping.scores.empty()) {
      for (const auto& m : config.models) {
        if (!config.baseline || m != config.baseline->model_name) mapping.scores.push_back(m);
      }
    }
    mapping = ColumnMapping::infer(csv::read_header(config.input_path), mapping);
    return parse_cohort(config.input_path, mapping, CohortRole::Evaluate);
  });
  std::optional<Cohort> train;
  if (config.baseline) {
    train = in_stage("parse training input", [&] {
      const auto mapping =
          ColumnMapping::infer(csv::read_header(config.baseline->train_path), config.baseline->columns);
      return parse_cohort(config.baseline->train_path, mapping, CohortRole::Train);
    });
  }

  RunSummary summary = run_comparison(evaluate, train, config);

  in_stage("write outputs", [&] {
    const fs::path dir = config.output_dir;
    fs::create_directories(dir);
    const Json doc = to_json(summary);
    write_text(dir / "summary.json", doc.dump(2) + "\n");

    const RenderedTables tables = render_tables(doc);
    write_text(dir / "table1_performance.csv", tables.performance);
    write_text(dir / "table2_thresholds.csv", tables.thresholds);
    write_text(dir / "table3_confusion.csv", tables.confusion);
    write_text(dir / "table4_auc.csv", tables.auc);
    if (!tables.comparisons.empty()) write_text(dir / "table4_comparisons.csv", tables.comparisons);
    write_text(dir / "tables.txt", tables.text);
    if (summary.baseline) write_text(dir / "baseline_fit.json", fit_to_json(*summary.baseline));

    for (const auto& m : doc.at("models")) {
      const std::string stem = file_stem(m.at("name").get<std::string>());
      write_text(dir / (stem + "_roc.csv"), curve_csv(m.at("roc")));
      write_text(dir / (stem + "_pr.csv"), curve_csv(m.at("pr")));
      write_text(dir / (stem + "_sweep.csv"), sweep_csv(m.at("sweep")));
      write_text(dir / (stem + "_calibration.csv"), calibration_csv(m.at("calibration")));
      write_text(dir / (stem + "_dca.csv"), dca_csv(m.at("dca")));
      for (const auto& [file, text] : render_model_figures(m, config.timestamps)) {
        write_text(dir / file, text);
      }
    }
  });
  return summary;
}

// ---------------------------------------------------------------- JSON

Json to_json(const IntervalEstimate& e) {
  Json j;
  j["point"] = e.point;
  j["lo"] = e.lo;
  j["hi"] = e.hi;
  j["method"] = std::string(to_string(e.method));
  j["level"] = e.level;
  if (e.method != CiMethod::DeLong) {
    j["n_replicates"] = e.n_replicates;
    j["seed"] = e.seed;
    j["redraws"] = e.redraws;
  }
  j["std_error"] = e.std_error;
  j["clipped"] = e.clipped;
  j["ordered"] = e.ordered;
  return j;
}

Json to_json(const DeLongResult& r) {
  Json j;
  j["mode"] = std::string(to_string(r.mode));
  j["auc_a"] = r.auc_a;
  j["auc_b"] = r.auc_b;
  j["difference"] = r.difference();
  j["var_a"] = r.var_a;
  j["var_b"] = r.var_b;
  j["covariance"] = r.covariance;
  j["z"] = r.z;
  j["p_two_sided"] = r.p_two_sided;
  j["n_a"] = r.n_a;
  j["n_b"] = r.n_b;
  return j;
}

Json to_json(const SweepRow& row) {
  Json j;
  j["threshold"] = row.counts.threshold;
  j["tp"] = row.counts.tp;
  j["fp"] = row.counts.fp;
  j["tn"] = row.counts.tn;
  j["fn"] = row.counts.fn;
  j["sensitivity"] = optional_number(row.metrics.sensitivity);
  j["specificity"] = optional_number(row.metrics.specificity);
  j["ppv"] = optional_number(row.metrics.ppv);
  j["npv"] = optional_number(row.metrics.npv);
  j["f1"] = optional_number(row.metrics.f1);
  j["accuracy"] = optional_number(row.metrics.accuracy);
  j["flagged_fraction"] = optional_number(row.metrics.flagged_fraction);
  return j;
}

Json to_json(const std::vector<SweepRow>& sweep) {
  Json j = Json::array();
  for (const auto& r : sweep) j.push_back(to_json(r));
  return j;
}

Json to_json(const CurveSeries& c) {
  Json j;
  j["kind"] = c.kind == CurveKind::Roc ? "roc" : "pr";
  j["area"] = c.area;
  j["positives"] = c.positives;
  j["negatives"] = c.negatives;
  if (c.kind == CurveKind::Pr) j["integrator"] = kPrIntegrator;
  Json pts = Json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"x", p.x}, {"y", p.y}, {"threshold", threshold_json(p.threshold)},
                   {"tp", p.tp}, {"fp", p.fp}});
  }
  j["points"] = pts;
  return j;
}

Json to_json(const std::vector<ReliabilityBin>& bins) {
  Json j = Json::array();
  for (const auto& b : bins) {
    j.push_back({{"lo", b.lo},
                 {"hi", b.hi},
                 {"n", b.n},
                 {"positives", b.positives},
                 {"mean_predicted", optional_number(b.mean_predicted)},
                 {"observed_frequency", optional_number(b.observed_frequency)}});
  }
  return j;
}

Json to_json(const NetBenefitCurve& c) {
  Json j;
  j["prevalence"] = c.prevalence;
  j["n"] = c.n;
  j["thresholds"] = c.thresholds;
  j["model"] = c.model_nb;
  j["treat_all"] = c.treat_all_nb;
  j["treat_none"] = c.treat_none_nb;
  if (!c.bands.empty()) {
    std::vector<double> lo, hi;
    for (const auto& b : c.bands) {
      lo.push_back(b.lo);
      hi.push_back(b.hi);
    }
    j["band_lo"] = lo;
    j["band_hi"] = hi;
    j["band_method"] = std::string(to_string(c.bands.front().method));
    j["band_replicates"] = c.bands.front().n_replicates;
    j["band_seed"] = c.bands.front().seed;
  }
  return j;
}

Json to_json(const LogisticFit& fit) { return Json::parse(fit_to_json(fit)); }

Json to_json(const ModelReport& m) {
  Json j;
  j["name"] = m.name;
  j["n"] = m.n;
  j["n_positive"] = m.n_positive;
  j["prevalence"] = m.prevalence;
  Json roc = to_json(m.roc);
  roc["auc"] = to_json(m.roc_auc);
  roc["auc_delong"] = to_json(m.roc_auc_delong);
  j["roc"] = roc;
  Json pr = to_json(m.pr);
  pr["auc"] = to_json(m.pr_auc);
  j["pr"] = pr;
  j["operating_point_zero"] = to_json(m.at_zero);
  j["sweep"] = to_json(m.sweep);
  j["best_f1"] = m.best_f1 ? to_json(*m.best_f1) : Json(nullptr);
  j["calibration"] = {{"bins", to_json(m.calibration)}, {"ece", m.ece}};
  j["dca"] = to_json(m.dca);
  j["score_histogram"] = {{"edges", m.histogram.edges},
                          {"positives", m.histogram.positives},
                          {"negatives", m.histogram.negatives}};
  return j;
}

Json to_json(const RunSummary& s) {
  Json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["tool"] = {{"name", "dxeval"}, {"version", tool_version()}};
  j["config"] = to_json(s.config);
  j["cohort"] = {{"n_cases", s.cohort_size},
                 {"n_positive", s.cohort_positives},
                 {"prevalence", s.cohort_size ? static_cast<double>(s.cohort_positives) /
                                                    static_cast<double>(s.cohort_size)
                                              : 0.0}};
  if (s.baseline) j["baseline"] = to_json(*s.baseline);
  Json models = Json::array();
  for (const auto& m : s.models) models.push_back(to_json(m));
  j["models"] = models;
  if (!s.comparisons.empty()) {
    Json cmps = Json::array();
    for (const auto& c : s.comparisons) {
      Json e = to_json(c.result);
      Json out;
      out["model_a"] = c.model_a;
      out["model_b"] = c.model_b;
      out.update(e);
      cmps.push_back(out);
    }
    j["comparisons"] = cmps;
  }
  Json prov;
  prov["classification_rule"] = kClassificationRule;
  prov["pr_auc_integrator"] = kPrIntegrator;
  prov["roc_auc_ties"] = "midrank (ties count one half)";
  prov["calibration_bins"] = "half-open [lo, hi), last bin closed";
  if (s.started_at) prov["started_at"] = *s.started_at;
  if (s.finished_at) prov["finished_at"] = *s.finished_at;
  j["provenance"] = prov;
  return j;
}

// ---------------------------------------------------------------- rendering

std::string format_fixed(const std::optional<double>& v, int decimals) {
  if (!v) return "--";
  return fmt::format("{:.{}f}", *v, decimals);
}

std::string format_percent(const std::optional<double>& fraction, int decimals) {
  if (!fraction) return "--";
  return fmt::format("{:.{}f}%", *fraction * 100.0, decimals);
}

std::string format_p_value(double p) {
  if (p < 0.001) return "<0.001";
  return fmt::format("{:.3f}", p);
}

std::vector<std::string> threshold_row_cells(const Json& r) {
  return {format_threshold(r.at("threshold").get<double>()),
          format_fixed(number_or_none(r.at("sensitivity")), 2),
          format_fixed(number_or_none(r.at("specificity")), 3),
          format_fixed(number_or_none(r.at("ppv")), 3),
          format_fixed(number_or_none(r.at("npv")), 3),
          format_fixed(number_or_none(r.at("f1")), 2),
          format_percent(number_or_none(r.at("flagged_fraction")), 1)};
}

namespace {

std::string aligned(const std::string& title, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string out = title + "\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      out += fmt::format("{:<{}}", rows[k][i], width[i] + (i + 1 < rows[k].size() ? 2 : 0));
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
    if (k == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out + "\n";
}

}  // namespace

RenderedTables render_tables(const Json& summary) {
  RenderedTables t;
  const Json& models = summary.at("models");

  std::vector<std::vector<std::string>> perf{{"Model", "N", "ROC-AUC (95% CI)", "PR-AUC (95% CI)",
                                              "Sensitivity", "Specificity", "F1-score"}};
  std::vector<std::vector<std::string>> thr{{"Model", "Threshold", "Sensitivity", "Specificity",
                                             "PPV", "NPV", "F1-score", "Flagged %"}};
  std::vector<std::vector<std::string>> conf{{"Model", "TP", "FP", "TN", "FN", "Threshold"}};
  std::vector<std::vector<std::string>> auc{
      {"Model", "ROC-AUC", "95% CI", "CI method", "DeLong 95% CI"}};

  for (const auto& m : models) {
    const std::string name = m.at("name").get<std::string>();
    const Json& zero = m.at("operating_point_zero");
    perf.push_back({name, full(m.at("n")), interval_cell(m.at("roc").at("auc")),
                    interval_cell(m.at("pr").at("auc")),
                    format_fixed(number_or_none(zero.at("sensitivity")), 2),
                    format_fixed(number_or_none(zero.at("specificity")), 2),
                    format_fixed(number_or_none(zero.at("f1")), 2)});
    for (const auto& row : m.at("sweep")) {
      auto cells = threshold_row_cells(row);
      cells.insert(cells.begin(), name);
      thr.push_back(cells);
    }
    conf.push_back({name, full(zero.at("tp")), full(zero.at("fp")), full(zero.at("tn")),
                    full(zero.at("fn")), format_threshold(zero.at("threshold").get<double>())});
    const Json& boot = m.at("roc").at("auc");
    auc.push_back({name, fmt::format("{:.3f}", boot.at("point").get<double>()), bracket(boot),
                   boot.at("method").get<std::string>(), bracket(m.at("roc").at("auc_delong"))});
  }

  t.performance = csv_text(perf);
  t.thresholds = csv_text(thr);
  t.confusion = csv_text(conf);
  t.auc = csv_text(auc);

  std::string notes;
  if (summary.contains("comparisons")) {
    std::vector<std::vector<std::string>> cmp{
        {"Model A", "Model B", "Mode", "AUC A", "AUC B", "Difference", "z", "p"}};
    for (const auto& c : summary.at("comparisons")) {
      const double diff = c.at("difference").get<double>();
      const auto p = format_p_value(c.at("p_two_sided").get<double>());
      cmp.push_back({c.at("model_a").get<std::string>(), c.at("model_b").get<std::string>(),
                     c.at("mode").get<std::string>(), fmt::format("{:.3f}", c.at("auc_a").get<double>()),
                     fmt::format("{:.3f}", c.at("auc_b").get<double>()), fmt::format("{:.3f}", diff),
                     fmt::format("{:.3f}", c.at("z").get<double>()), p});
      notes += fmt::format("{} vs {}: difference = {:.3f}, p{}\n", c.at("model_a").get<std::string>(),
                           c.at("model_b").get<std::string>(), diff,
                           p.front() == '<' ? p : "=" + p);
    }
    t.comparisons = csv_text(cmp);
    notes = aligned("Pairwise DeLong comparisons", cmp) + notes;
  }

  t.text = aligned("Overall classification performance (sensitivity/specificity/F1 at threshold 0)", perf) +
           aligned("Decision threshold analysis", thr) +
           aligned("Confusion matrices at threshold 0.0", conf) +
           aligned("ROC-AUC with 95% confidence intervals", auc) + notes;
  return t;
}

std::string sweep_csv(const Json& sweep) {
  std::vector<std::vector<std::string>> rows{{"threshold", "sensitivity", "specificity", "ppv", "npv",
                                              "f1", "accuracy", "flagged_pct", "tp", "fp", "tn", "fn"}};
  for (const auto& r : sweep) {
    const auto flagged = number_or_none(r.at("flagged_fraction"));
    rows.push_back({full(r.at("threshold")), full(r.at("sensitivity")), full(r.at("specificity")),
                    full(r.at("ppv")), full(r.at("npv")), full(r.at("f1")), full(r.at("accuracy")),
                    flagged ? csv::format_double(*flagged * 100.0) : "--", full(r.at("tp")),
                    full(r.at("fp")), full(r.at("tn")), full(r.at("fn"))});
  }
  return csv_text(rows);
}

std::string curve_csv(const Json& curve) {
  std::vector<std::vector<std::string>> rows{{"x", "y", "threshold"}};
  for (const auto& p : curve.at("points")) {
    rows.push_back({full(p.at("x")), full(p.at("y")),
                    p.at("threshold").is_null() ? "inf" : full(p.at("threshold"))});
  }
  return csv_text(rows);
}

std::string calibration_csv(const Json& calibration) {
  std::vector<std::vector<std::string>> rows{
      {"lo", "hi", "n", "positives", "mean_predicted", "observed_frequency"}};
  for (const auto& b : calibration.at("bins")) {
    rows.push_back({full(b.at("lo")), full(b.at("hi")), full(b.at("n")), full(b.at("positives")),
                    full(b.at("mean_predicted")), full(b.at("observed_frequency"))});
  }
  return csv_text(rows);
}

std::string dca_csv(const Json& dca) {
  const bool bands = dca.contains("band_lo");
  std::vector<std::vector<std::string>> rows;
  if (bands) {
    rows.push_back({"threshold", "model", "treat_all", "treat_none", "band_lo", "band_hi"});
  } else {
    rows.push_back({"threshold", "model", "treat_all", "treat_none"});
  }
  const auto& t = dca.at("thresholds");
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::string> r{full(t[i]), full(dca.at("model")[i]), full(dca.at("treat_all")[i]),
                               full(dca.at("treat_none")[i])};
    if (bands) {
      r.push_back(full(dca.at("band_lo")[i]));
      r.push_back(full(dca.at("band_hi")[i]));
    }
    rows.push_back(r);
  }
  return csv_text(rows);
}

namespace {

std::optional<std::string> metadata_for(bool enabled) {
  if (!enabled) return std::nullopt;
  return fmt::format("dxeval {} rendered {}", tool_version(), now_utc());
}

std::vector<std::pair<double, double>> curve_points(const Json& curve) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve.at("points")) pts.emplace_back(p.at("x").get<double>(), p.at("y").get<double>());
  return pts;
}

}  // namespace

std::string roc_svg(const Json& curve, const std::string& title, bool metadata) {
  svg::Plot p;
  p.title = title;
  p.x_label = "False positive rate (1 - specificity)";
  p.y_label = "True positive rate (sensitivity)";
  p.metadata = metadata_for(metadata);
  p.lines.push_back({{{0.0, 0.0}, {1.0, 1.0}}, "#7f7f7f", "chance", true, false});
  p.lines.push_back({curve_points(curve), "#1f77b4",
                     fmt::format("AUC = {:.3f}", curve.at("area").get<double>()), false, false});
  return svg::render(p);
}

std::string pr_svg(const Json& curve, const std::string& title, bool metadata) {
  svg::Plot p;
  p.title = title;
  p.x_label = "Recall (sensitivity)";
  p.y_label = "Precision (PPV)";
  p.metadata = metadata_for(metadata);
  const double pos = curve.at("positives").get<double>();
  const double neg = curve.at("negatives").get<double>();
  const double prev = pos / (pos + neg);
  p.lines.push_back({{{0.0, prev}, {1.0, prev}}, "#7f7f7f",
                     fmt::format("prevalence = {:.3f}", prev), true, false});
  // average precision is a step integral: precision holds over each recall increment
  const auto pts = curve_points(curve);
  std::vector<std::pair<double, double>> steps;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) steps.emplace_back(pts[i - 1].first, pts[i].second);
    steps.push_back(pts[i]);
  }
  p.lines.push_back({steps, "#2ca02c", fmt::format("AP = {:.3f}", curve.at("area").get<double>()),
                     false, false});
  return svg::render(p);
}

std::string calibration_svg(const Json& calibration, const std::string& title, bool metadata) {
  svg::Plot p;
  p.title = title;
  p.x_label = "Mean predicted probability";
  p.y_label = "Observed frequency";
  p.metadata = metadata_for(metadata);
  p.lines.push_back({{{0.0, 0.0}, {1.0, 1.0}}, "#7f7f7f", "perfect calibration", true, false});
  std::vector<std::pair<double, double>> pts;
  for (const auto& b : calibration.at("bins")) {
    if (b.at("n").get<std::size_t>() == 0) continue;
    pts.emplace_back(b.at("mean_predicted").get<double>(), b.at("observed_frequency").get<double>());
  }
  p.lines.push_back({pts, "#1f77b4",
                     fmt::format("ECE = {:.3f}", calibration.at("ece").get<double>()), false, false});
  p.markers = pts;
  return svg::render(p);
}

std::string dca_svg(const Json& dca, const std::string& title, bool metadata) {
  svg::Plot p;
  p.title = title;
  p.x_label = "Threshold probability";
  p.y_label = "Net benefit";
  p.metadata = metadata_for(metadata);
  const auto t = dca.at("thresholds").get<std::vector<double>>();
  const auto model = dca.at("model").get<std::vector<double>>();
  const auto all = dca.at("treat_all").get<std::vector<double>>();
  const double prev = dca.at("prevalence").get<double>();
  p.x_min = t.empty() ? 0.0 : std::min(0.0, t.front());
  p.x_max = t.empty() ? 1.0 : t.back();
  p.y_max = std::max(0.05, prev * 1.1);
  p.y_min = -p.y_max / 2.0;
  if (dca.contains("band_lo")) {
    p.bands.push_back({t, dca.at("band_lo").get<std::vector<double>>(),
                       dca.at("band_hi").get<std::vector<double>>(), "#1f77b4",
                       "bootstrap 95% band"});
  }
  auto series = [&](const std::vector<double>& y) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < t.size(); ++i) pts.emplace_back(t[i], y[i]);
    return pts;
  };
  p.lines.push_back({series(model), "#1f77b4", "model", false, false});
  p.lines.push_back({series(all), "#ff7f0e", "treat all", true, false});
  p.lines.push_back({{{p.x_min, 0.0}, {p.x_max, 0.0}}, "#000000", "treat none", false, false});
  return svg::render(p);
}

std::map<std::string, std::string> render_model_figures(const Json& m, bool metadata) {
  const std::string name = m.at("name").get<std::string>();
  const std::string stem = file_stem(name);
  std::map<std::string, std::string> out;
  out[stem + "_roc.svg"] = roc_svg(m.at("roc"), "ROC - " + name, metadata);
  out[stem + "_pr.svg"] = pr_svg(m.at("pr"), "Precision-recall - " + name, metadata);
  out[stem + "_calibration.svg"] =
      calibration_svg(m.at("calibration"), "Calibration - " + name, metadata);
  out[stem + "_dca.svg"] = dca_svg(m.at("dca"), "Decision curve - " + name, metadata);

  const Json& h = m.at("score_histogram");
  const auto edges = h.at("edges").get<std::vector<double>>();
  const auto pos = h.at("positives").get<std::vector<double>>();
  const auto neg = h.at("negatives").get<std::vector<double>>();
  const double npos = std::max(1.0, std::accumulate(pos.begin(), pos.end(), 0.0));
  const double nneg = std::max(1.0, std::accumulate(neg.begin(), neg.end(), 0.0));
  svg::Plot p;
  p.title = "Score distribution - " + name;
  p.x_label = "Predicted probability of the positive class";
  p.y_label = "Fraction of class";
  p.metadata = metadata_for(metadata);
  svg::Bars bp{{}, {}, {}, "#2ca02c", "positive (label 1)"};
  svg::Bars bn{{}, {}, {}, "#d62728", "negative (label 0)"};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    bp.left.push_back(edges[i]);
    bp.right.push_back(edges[i + 1]);
    bp.height.push_back(pos[i] / npos);
    bn.left.push_back(edges[i]);
    bn.right.push_back(edges[i + 1]);
    bn.height.push_back(neg[i] / nneg);
  }
  p.bars = {bn, bp};
  out[stem + "_scores.svg"] = svg::render(p);
  return out;
}

}  // namespace dxeval
