#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dxeval {

/// Peripheral blood differential, counts in 10^9/L.
struct BloodPanel {
  double neutrophils = 0.0;
  double monocytes = 0.0;
  double lymphocytes = 0.0;

  friend bool operator==(const BloodPanel&, const BloodPanel&) = default;
};

/// One evaluation unit (image or subject). `label` is 1 for morphologically
/// normal, 0 for abnormal. A score is absent when a model did not evaluate
/// the case.
struct CaseRecord {
  std::string case_id;
  int label = 0;
  std::optional<double> pct_normal;
  std::optional<BloodPanel> blood;
  std::optional<double> siri;
  std::map<std::string, double> scores;

  friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

enum class CohortRole { Train, Evaluate };

/// Validated, immutable collection of cases. Construction checks every
/// record invariant and case_id uniqueness; nothing mutates afterwards.
class Cohort {
 public:
  Cohort() = default;
  explicit Cohort(std::vector<CaseRecord> cases, CohortRole role = CohortRole::Evaluate);

  std::span<const CaseRecord> cases() const noexcept { return cases_; }
  const CaseRecord& operator[](std::size_t i) const { return cases_[i]; }
  std::size_t size() const noexcept { return cases_.size(); }
  bool empty() const noexcept { return cases_.empty(); }
  CohortRole role() const noexcept { return role_; }

  std::size_t positives() const noexcept;
  std::size_t negatives() const noexcept { return size() - positives(); }

  /// Names of every score column present on at least one case, sorted.
  std::vector<std::string> score_names() const;

  friend bool operator==(const Cohort&, const Cohort&) = default;

 private:
  std::vector<CaseRecord> cases_;
  CohortRole role_ = CohortRole::Evaluate;
};

void validate(const CaseRecord& record);
void validate(const BloodPanel& panel);

/// Logical field to CSV column mapping. Unset optional fields are not read.
struct ColumnMapping {
  std::string case_id = "case_id";
  std::string label = "label";
  std::optional<std::string> pct_normal;
  std::optional<std::string> neutrophils;
  std::optional<std::string> monocytes;
  std::optional<std::string> lymphocytes;
  std::optional<std::string> siri;
  std::vector<std::string> scores;

  /// Fills unset feature fields with the conventional column names
  /// (pct_normal, neutrophils, monocytes, lymphocytes, siri) the header carries.
  static ColumnMapping infer(std::span<const std::string> header, ColumnMapping base);
  static ColumnMapping infer(std::span<const std::string> header);
};

/// Header columns the mapping does not reference, in header order.
std::vector<std::string> unmapped_columns(std::span<const std::string> header,
                                          const ColumnMapping& mapping);

Cohort parse_cohort(std::istream& in, const ColumnMapping& mapping,
                    CohortRole role = CohortRole::Evaluate);
Cohort parse_cohort(const std::filesystem::path& path, const ColumnMapping& mapping,
                    CohortRole role = CohortRole::Evaluate);

/// Writes the standard cohort CSV. Columns: case_id, label, then whichever
/// optional features any case carries, then score columns in name order.
/// Absent values are empty cells.
void write_cohort(std::ostream& out, const Cohort& cohort);
void write_cohort(const std::filesystem::path& path, const Cohort& cohort);

/// Mapping that reads back exactly what write_cohort emits for `cohort`.
ColumnMapping standard_mapping(const Cohort& cohort);

/// Sorted case_ids present in both cohorts. Empty means leakage-free.
std::vector<std::string> check_disjoint(const Cohort& a, const Cohort& b);

double prevalence(const Cohort& cohort);

/// Returns a copy of the cohort with every label inverted.
Cohort flip_labels(const Cohort& cohort);

/// Returns a copy with `name` set on every case, in case order.
Cohort with_scores(const Cohort& cohort, const std::string& name, std::span<const double> values);

/// Scores and labels of the cases carrying one model's score, in cohort order.
struct ScoredSample {
  std::vector<double> scores;
  std::vector<int> labels;
  std::vector<std::size_t> rows;  // index into the source cohort

  std::size_t size() const noexcept { return scores.size(); }
};

ScoredSample scored_sample(const Cohort& cohort, const std::string& model);

/// Cases carrying both scores; used for paired comparisons.
struct PairedSample {
  std::vector<double> scores_a;
  std::vector<double> scores_b;
  std::vector<int> labels;
};

PairedSample paired_sample(const Cohort& cohort, const std::string& model_a,
                           const std::string& model_b);

}  // namespace dxeval
