#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dxeval/baseline.hpp"
#include "dxeval/calibration.hpp"
#include "dxeval/cohort.hpp"
#include "dxeval/curves.hpp"
#include "dxeval/dca.hpp"
#include "dxeval/inference.hpp"
#include "dxeval/thresholds.hpp"

namespace dxeval {

using Json = nlohmann::ordered_json;

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr const char* kOutputDirEnv = "DXEVAL_OUTPUT_DIR";

std::string tool_version();

/// Fit the WHO(+SIRI) logistic baseline on a training cohort and score the
/// evaluation cohort with it under `model_name`.
struct BaselineRequest {
  std::filesystem::path train_path;
  ColumnMapping columns;
  std::vector<Feature> predictors{Feature::PctNormal, Feature::Siri};
  std::string model_name = "who_siri";
  double ridge = 0.0;
};

struct RunConfig {
  std::filesystem::path input_path;
  ColumnMapping columns;
  std::vector<std::string> models;
  std::optional<BaselineRequest> baseline;
  std::vector<double> threshold_grid = default_threshold_grid();
  std::size_t replicates = 1000;
  std::uint64_t seed = 42;
  CiMethod ci_method = CiMethod::Bca;
  std::size_t workers = 1;
  std::size_t calibration_bins = 10;
  Binning binning = Binning::EqualWidth;
  std::vector<double> dca_grid = default_dca_grid();
  CiMethod dca_band_method = CiMethod::Percentile;
  DecisionRule dca_rule = DecisionRule::SameThreshold;
  double dca_fixed_cutoff = 0.5;
  std::optional<DeLongMode> delong_mode;  // required when two or more models
  std::filesystem::path output_dir;
  bool timestamps = false;  // provenance times and SVG metadata; off keeps reruns byte-identical
};

/// Reads a JSON run config. Relative paths resolve against the file's
/// directory; a missing output_dir falls back to $DXEVAL_OUTPUT_DIR, then
/// "dxeval_out".
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir);
Json to_json(const RunConfig& config);

struct ScoreHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
};

struct ModelReport {
  std::string name;
  std::size_t n = 0;
  std::size_t n_positive = 0;
  double prevalence = 0.0;
  CurveSeries roc;
  CurveSeries pr;
  IntervalEstimate roc_auc;        // bootstrap, configured method
  IntervalEstimate roc_auc_delong;
  IntervalEstimate pr_auc;         // bootstrap, configured method
  SweepRow at_zero;                // the all-positive operating point
  std::vector<SweepRow> sweep;
  std::optional<SweepRow> best_f1;
  std::vector<ReliabilityBin> calibration;
  double ece = 0.0;
  NetBenefitCurve dca;
  ScoreHistogram histogram;
};

struct Comparison {
  std::string model_a;
  std::string model_b;
  DeLongResult result;
};

struct RunSummary {
  RunConfig config;
  std::size_t cohort_size = 0;
  std::size_t cohort_positives = 0;
  std::optional<LogisticFit> baseline;
  std::vector<ModelReport> models;
  std::vector<Comparison> comparisons;
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;
};

/// Per-model analysis on one score column; no files written.
ModelReport analyse_model(const Cohort& cohort, const std::string& model, const RunConfig& config);

/// Whole pipeline on in-memory cohorts (`train` only when config.baseline is set).
RunSummary run_comparison(const Cohort& evaluate, const std::optional<Cohort>& train,
                          const RunConfig& config);

/// Parses inputs, runs, and writes every artefact into config.output_dir.
RunSummary run_comparison(const RunConfig& config);

// JSON is canonical; every CSV and SVG below is rendered from it.
Json to_json(const IntervalEstimate& e);
Json to_json(const DeLongResult& r);
Json to_json(const SweepRow& row);
Json to_json(const std::vector<SweepRow>& sweep);
Json to_json(const CurveSeries& curve);
Json to_json(const std::vector<ReliabilityBin>& bins);
Json to_json(const NetBenefitCurve& curve);
Json to_json(const LogisticFit& fit);
Json to_json(const ModelReport& m);
Json to_json(const RunSummary& s);

/// "--" for an undefined value, else fixed-point with `decimals` places.
std::string format_fixed(const std::optional<double>& v, int decimals);
/// Fraction rendered as a percentage, e.g. 0.7576 -> "75.8%".
std::string format_percent(const std::optional<double>& fraction, int decimals = 1);
/// "<0.001" below 0.001, else three decimals.
std::string format_p_value(double p);

struct RenderedTables {
  std::string performance;  // overall discrimination and threshold-0 metrics
  std::string thresholds;   // decision threshold analysis
  std::string confusion;    // confusion matrices at threshold 0
  std::string auc;          // ROC-AUC with bootstrap and DeLong CIs
  std::string comparisons;  // pairwise DeLong tests; empty with a single model
  std::string text;         // everything above as aligned plain text
};

/// Formats tables from a summary document: AUCs 3 decimals, sensitivity and
/// F1 2 decimals, specificity/PPV/NPV 3 decimals, flagged % 1 decimal,
/// undefined cells "--".
RenderedTables render_tables(const Json& summary);

/// One threshold-analysis row: threshold, sens, spec, PPV, NPV, F1, flagged %.
std::vector<std::string> threshold_row_cells(const Json& sweep_row);

// Machine-readable CSVs at full precision.
std::string sweep_csv(const Json& sweep);
std::string curve_csv(const Json& curve);
std::string calibration_csv(const Json& calibration);
std::string dca_csv(const Json& dca);

/// File name -> SVG text for every figure of one model entry.
std::map<std::string, std::string> render_model_figures(const Json& model, bool metadata = false);

std::string roc_svg(const Json& curve, const std::string& title, bool metadata = false);
std::string pr_svg(const Json& curve, const std::string& title, bool metadata = false);
std::string calibration_svg(const Json& calibration, const std::string& title,
                            bool metadata = false);
std::string dca_svg(const Json& dca, const std::string& title, bool metadata = false);

}  // namespace dxeval
