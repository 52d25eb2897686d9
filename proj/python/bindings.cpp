#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
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

namespace py = pybind11;
using namespace dxeval;

namespace {

// Structured results cross the boundary as JSON text; the Python package
// decodes them into dicts.
std::string dump(const Json& j) { return j.dump(); }

BootstrapOptions boot(std::size_t replicates, std::uint64_t seed, const std::string& method,
                      std::size_t workers) {
  BootstrapOptions o;
  o.replicates = replicates;
  o.seed = seed;
  o.method = parse_ci_method(method);
  o.workers = workers;
  return o;
}

std::optional<double> opt(const std::optional<double>& v) { return v; }

py::dict metrics_dict(const ConfusionCounts& c) {
  const MetricBundle m = metrics_from(c);
  py::dict d;
  d["tp"] = c.tp;
  d["fp"] = c.fp;
  d["tn"] = c.tn;
  d["fn"] = c.fn;
  d["threshold"] = c.threshold;
  d["sensitivity"] = opt(m.sensitivity);
  d["specificity"] = opt(m.specificity);
  d["ppv"] = opt(m.ppv);
  d["npv"] = opt(m.npv);
  d["f1"] = opt(m.f1);
  d["accuracy"] = opt(m.accuracy);
  d["flagged_fraction"] = opt(m.flagged_fraction);
  return d;
}

py::dict sample_dict(const Cohort& cohort, const std::string& model) {
  const ScoredSample s = scored_sample(cohort, model);
  py::dict d;
  d["scores"] = s.scores;
  d["labels"] = s.labels;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Diagnostic classifier evaluation core";
  m.attr("__version__") = tool_version();

  static py::exception<Error> error(m, "DxevalError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      PyErr_SetObject(exc.ptr(),
                      py::make_tuple(std::string(to_string(e.code())), std::string(e.what())).ptr());
    }
  });

  m.def("confusion_at", [](const std::vector<double>& s, const std::vector<int>& y, double t) {
    return metrics_dict(confusion_at(s, y, t));
  }, py::arg("scores"), py::arg("labels"), py::arg("threshold"));
  m.def("metrics_from", [](std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
    return metrics_dict(ConfusionCounts{tp, fp, tn, fn, 0.0});
  }, py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));
  m.def("threshold_sweep_json", [](const std::vector<double>& s, const std::vector<int>& y,
                                   const std::vector<double>& grid) {
    return dump(to_json(threshold_sweep(s, y, grid)));
  });
  m.def("parse_grid", [](const std::string& text) { return parse_grid(text); });

  m.def("roc_auc", [](const std::vector<double>& s, const std::vector<int>& y) { return roc_auc(s, y); },
        py::arg("scores"), py::arg("labels"));
  m.def("average_precision",
        [](const std::vector<double>& s, const std::vector<int>& y) { return average_precision(s, y); },
        py::arg("scores"), py::arg("labels"));
  m.def("roc_curve_json", [](const std::vector<double>& s, const std::vector<int>& y) {
    return dump(to_json(roc_curve(s, y)));
  });
  m.def("pr_curve_json", [](const std::vector<double>& s, const std::vector<int>& y) {
    return dump(to_json(pr_curve(s, y)));
  });

  m.def("bootstrap_auc_ci_json",
        [](const std::vector<double>& s, const std::vector<int>& y, std::size_t replicates,
           std::uint64_t seed, const std::string& method, std::size_t workers) {
          py::gil_scoped_release release;
          return dump(to_json(bootstrap_auc_ci(s, y, boot(replicates, seed, method, workers))));
        });
  m.def("delong_interval_json", [](const std::vector<double>& s, const std::vector<int>& y) {
    return dump(to_json(delong_interval(s, y)));
  });
  m.def("delong_paired_json", [](const std::vector<double>& a, const std::vector<double>& b,
                                 const std::vector<int>& y) {
    return dump(to_json(delong_compare(a, b, y)));
  });
  m.def("delong_unpaired_json", [](const std::vector<double>& a, const std::vector<int>& ya,
                                   const std::vector<double>& b, const std::vector<int>& yb) {
    return dump(to_json(delong_compare(a, ya, b, yb)));
  });

  m.def("reliability_json", [](const std::vector<double>& s, const std::vector<int>& y,
                               const std::string& binning, std::size_t bins) {
    const auto r = reliability_curve(s, y, parse_binning(binning), bins);
    Json j{{"bins", to_json(r)}, {"ece", expected_calibration_error(r)}};
    return dump(j);
  });

  m.def("net_benefit", [](const std::vector<double>& s, const std::vector<int>& y, double t) {
    return net_benefit(s, y, t);
  });
  m.def("treat_all_net_benefit", &treat_all_net_benefit, py::arg("prevalence"), py::arg("t"));
  m.def("dca_json", [](const std::vector<double>& s, const std::vector<int>& y,
                       const std::vector<double>& grid) { return dump(to_json(dca_curve(s, y, grid))); });

  m.def("compute_siri", [](double n, double mono, double l) { return compute_siri({n, mono, l}); });

  m.def("read_sample", [](const std::string& path, const std::string& model) {
    const auto header = csv::read_header(path);
    ColumnMapping cm = ColumnMapping::infer(header);
    cm.scores = {model};
    return sample_dict(parse_cohort(path, cm), model);
  }, py::arg("path"), py::arg("model"));

  m.def("fit_baseline_json", [](const std::string& train_path, const std::vector<std::string>& predictors,
                                double ridge) {
    const auto header = csv::read_header(train_path);
    const Cohort train = parse_cohort(train_path, ColumnMapping::infer(header), CohortRole::Train);
    std::vector<Feature> feats;
    for (const auto& p : predictors) feats.push_back(parse_feature(p));
    FitOptions o;
    o.ridge = ridge;
    return fit_to_json(fit_logistic(train, feats, o));
  });

  m.def("generate_binormal", [](std::size_t n_pos, std::size_t n_neg, double mu_pos, double mu_neg,
                                double sigma_pos, double sigma_neg, std::uint64_t seed) {
    BinormalSpec s;
    s.n_pos = n_pos;
    s.n_neg = n_neg;
    s.mu_pos = mu_pos;
    s.mu_neg = mu_neg;
    s.sigma_pos = sigma_pos;
    s.sigma_neg = sigma_neg;
    s.seed = seed;
    return sample_dict(generate_binormal(s), s.score_name);
  }, py::arg("n_pos"), py::arg("n_neg"), py::arg("mu_pos") = 1.0, py::arg("mu_neg") = 0.0,
     py::arg("sigma_pos") = 1.0, py::arg("sigma_neg") = 1.0, py::arg("seed") = 42);
  m.def("write_demo", [](const std::string& eval_path, const std::string& train_path, std::uint64_t seed) {
    const auto demo = generate_demo(seed);
    write_cohort(std::filesystem::path(eval_path), demo.evaluate);
    write_cohort(std::filesystem::path(train_path), demo.train);
  }, py::arg("eval_path"), py::arg("train_path"), py::arg("seed") = 2024);

  m.def("run_report_json", [](const std::string& config_path) {
    const RunConfig cfg = load_run_config(config_path);
    py::gil_scoped_release release;
    return dump(to_json(run_comparison(cfg)));
  }, py::arg("config_path"));
  m.def("render_tables", [](const std::string& summary_json) {
    const auto t = render_tables(Json::parse(summary_json));
    py::dict d;
    d["performance"] = t.performance;
    d["thresholds"] = t.thresholds;
    d["confusion"] = t.confusion;
    d["auc"] = t.auc;
    d["comparisons"] = t.comparisons;
    d["text"] = t.text;
    return d;
  });
}
