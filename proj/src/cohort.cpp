#include "dxeval/cohort.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dxeval/csv.hpp"
#include "dxeval/error.hpp"

namespace dxeval {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void malformed(std::size_t row, const std::string& column, std::string_view why) {
  throw Error(ErrorCode::MalformedValue, fmt::format("row {}, column '{}': {}", row, column, why));
}

std::optional<double> parse_number(std::string_view cell, std::size_t row,
                                   const std::string& column) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    malformed(row, column, fmt::format("'{}' is not a finite number", cell));
  }
  return value;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void validate(const BloodPanel& p) {
  if (!std::isfinite(p.neutrophils) || !std::isfinite(p.monocytes) ||
      !std::isfinite(p.lymphocytes)) {
    throw Error(ErrorCode::OutOfRange, "blood panel values must be finite");
  }
  if (p.neutrophils <= 0.0 || p.monocytes < 0.0 || p.lymphocytes <= 0.0) {
    throw Error(ErrorCode::OutOfRange,
                "blood panel requires neutrophils > 0, monocytes >= 0, lymphocytes > 0");
  }
}

void validate(const CaseRecord& r) {
  if (r.label != 0 && r.label != 1) {
    throw Error(ErrorCode::OutOfRange, fmt::format("case '{}': label must be 0 or 1", r.case_id));
  }
  if (r.pct_normal && !(*r.pct_normal >= 0.0 && *r.pct_normal <= 100.0)) {
    throw Error(ErrorCode::OutOfRange,
                fmt::format("case '{}': pct_normal must lie in [0,100]", r.case_id));
  }
  if (r.siri && !(std::isfinite(*r.siri) && *r.siri >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, fmt::format("case '{}': siri must be >= 0", r.case_id));
  }
  if (r.blood) validate(*r.blood);
  for (const auto& [name, score] : r.scores) {
    if (!in_unit(score)) {
      throw Error(ErrorCode::OutOfRange,
                  fmt::format("case '{}': score '{}' must lie in [0,1]", r.case_id, name));
    }
  }
}

Cohort::Cohort(std::vector<CaseRecord> cases, CohortRole role)
    : cases_(std::move(cases)), role_(role) {
  std::unordered_set<std::string> seen;
  seen.reserve(cases_.size());
  for (const auto& c : cases_) {
    validate(c);
    if (!seen.insert(c.case_id).second) {
      throw Error(ErrorCode::DuplicateCaseId, fmt::format("case_id '{}' repeats", c.case_id));
    }
  }
}

std::size_t Cohort::positives() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cases_.begin(), cases_.end(), [](const CaseRecord& c) { return c.label == 1; }));
}

std::vector<std::string> Cohort::score_names() const {
  std::set<std::string> names;
  for (const auto& c : cases_) {
    for (const auto& kv : c.scores) names.insert(kv.first);
  }
  return {names.begin(), names.end()};
}

ColumnMapping ColumnMapping::infer(std::span<const std::string> header, ColumnMapping base) {
  auto has = [&](const std::string& name) {
    return std::find(header.begin(), header.end(), name) != header.end();
  };
  auto fill = [&](std::optional<std::string>& field, const char* conventional) {
    if (!field && has(conventional)) field = conventional;
  };
  fill(base.pct_normal, "pct_normal");
  fill(base.neutrophils, "neutrophils");
  fill(base.monocytes, "monocytes");
  fill(base.lymphocytes, "lymphocytes");
  fill(base.siri, "siri");
  return base;
}

ColumnMapping ColumnMapping::infer(std::span<const std::string> header) {
  return infer(header, ColumnMapping{});
}

std::vector<std::string> unmapped_columns(std::span<const std::string> header,
                                          const ColumnMapping& m) {
  std::set<std::string> taken{m.case_id, m.label};
  for (const auto* f : {&m.pct_normal, &m.neutrophils, &m.monocytes, &m.lymphocytes, &m.siri}) {
    if (*f) taken.insert(**f);
  }
  taken.insert(m.scores.begin(), m.scores.end());
  std::vector<std::string> out;
  for (const auto& h : header) {
    if (!taken.contains(h)) out.push_back(h);
  }
  return out;
}

Cohort parse_cohort(std::istream& in, const ColumnMapping& mapping, CohortRole role) {
  const csv::Table table = csv::read(in);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.header.size(); ++i) index.emplace(table.header[i], i);

  auto column = [&](const std::string& name) -> std::size_t {
    auto it = index.find(name);
    if (it == index.end()) {
      throw Error(ErrorCode::MissingColumn, fmt::format("header has no column '{}'", name));
    }
    return it->second;
  };
  auto optional_column = [&](const std::optional<std::string>& name) -> std::optional<std::size_t> {
    if (!name) return std::nullopt;
    return column(*name);
  };

  const std::size_t id_col = column(mapping.case_id);
  const std::size_t label_col = column(mapping.label);
  const auto pct_col = optional_column(mapping.pct_normal);
  const auto neut_col = optional_column(mapping.neutrophils);
  const auto mono_col = optional_column(mapping.monocytes);
  const auto lymph_col = optional_column(mapping.lymphocytes);
  const auto siri_col = optional_column(mapping.siri);
  const bool any_blood = neut_col || mono_col || lymph_col;
  if (any_blood && !(neut_col && mono_col && lymph_col)) {
    throw Error(ErrorCode::MissingColumn,
                "blood panel needs neutrophil, monocyte and lymphocyte columns together");
  }
  std::vector<std::pair<std::string, std::size_t>> score_cols;
  for (const auto& s : mapping.scores) score_cols.emplace_back(s, column(s));

  if (table.rows.empty()) throw Error(ErrorCode::EmptyCohort, "no data rows");

  std::vector<CaseRecord> cases;
  cases.reserve(table.rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 1;
    CaseRecord rec;

    rec.case_id = std::string(trim(row[id_col]));
    if (rec.case_id.empty()) malformed(row_no, mapping.case_id, "empty case_id");
    if (!seen.insert(rec.case_id).second) {
      throw Error(ErrorCode::DuplicateCaseId,
                  fmt::format("row {}: case_id '{}' repeats", row_no, rec.case_id));
    }

    const std::string_view label = trim(row[label_col]);
    if (label == "0") {
      rec.label = 0;
    } else if (label == "1") {
      rec.label = 1;
    } else {
      malformed(row_no, mapping.label, fmt::format("label '{}' is not 0 or 1", label));
    }

    if (pct_col) {
      rec.pct_normal = parse_number(row[*pct_col], row_no, *mapping.pct_normal);
      if (rec.pct_normal && !(*rec.pct_normal >= 0.0 && *rec.pct_normal <= 100.0)) {
        malformed(row_no, *mapping.pct_normal, "percent normal outside [0,100]");
      }
    }
    if (any_blood) {
      auto n = parse_number(row[*neut_col], row_no, *mapping.neutrophils);
      auto m = parse_number(row[*mono_col], row_no, *mapping.monocytes);
      auto l = parse_number(row[*lymph_col], row_no, *mapping.lymphocytes);
      const int present = int(n.has_value()) + int(m.has_value()) + int(l.has_value());
      if (present == 3) {
        BloodPanel p{*n, *m, *l};
        try {
          validate(p);
        } catch (const Error& e) {
          malformed(row_no, *mapping.lymphocytes, e.detail());
        }
        rec.blood = p;
      } else if (present != 0) {
        malformed(row_no, *mapping.neutrophils, "blood panel is partially filled");
      }
    }
    if (siri_col) {
      rec.siri = parse_number(row[*siri_col], row_no, *mapping.siri);
      if (rec.siri && *rec.siri < 0.0) malformed(row_no, *mapping.siri, "negative SIRI");
    }
    for (const auto& [name, col] : score_cols) {
      auto v = parse_number(row[col], row_no, name);
      if (!v) continue;
      if (!in_unit(*v)) malformed(row_no, name, "probability outside [0,1]");
      rec.scores.emplace(name, *v);
    }
    cases.push_back(std::move(rec));
  }
  return Cohort(std::move(cases), role);
}

Cohort parse_cohort(const std::filesystem::path& path, const ColumnMapping& mapping,
                    CohortRole role) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return parse_cohort(in, mapping, role);
}

ColumnMapping standard_mapping(const Cohort& cohort) {
  ColumnMapping m;
  bool pct = false, blood = false, siri = false;
  for (const auto& c : cohort.cases()) {
    pct |= c.pct_normal.has_value();
    blood |= c.blood.has_value();
    siri |= c.siri.has_value();
  }
  if (pct) m.pct_normal = "pct_normal";
  if (blood) {
    m.neutrophils = "neutrophils";
    m.monocytes = "monocytes";
    m.lymphocytes = "lymphocytes";
  }
  if (siri) m.siri = "siri";
  m.scores = cohort.score_names();
  return m;
}

void write_cohort(std::ostream& out, const Cohort& cohort) {
  const ColumnMapping m = standard_mapping(cohort);
  std::vector<std::string> header{m.case_id, m.label};
  if (m.pct_normal) header.push_back(*m.pct_normal);
  if (m.neutrophils) {
    header.push_back(*m.neutrophils);
    header.push_back(*m.monocytes);
    header.push_back(*m.lymphocytes);
  }
  if (m.siri) header.push_back(*m.siri);
  header.insert(header.end(), m.scores.begin(), m.scores.end());
  csv::write_row(out, header);

  auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : ""; };
  std::vector<std::string> row;
  for (const auto& c : cohort.cases()) {
    row.clear();
    row.push_back(c.case_id);
    row.push_back(c.label ? "1" : "0");
    if (m.pct_normal) row.push_back(opt(c.pct_normal));
    if (m.neutrophils) {
      row.push_back(c.blood ? csv::format_double(c.blood->neutrophils) : "");
      row.push_back(c.blood ? csv::format_double(c.blood->monocytes) : "");
      row.push_back(c.blood ? csv::format_double(c.blood->lymphocytes) : "");
    }
    if (m.siri) row.push_back(opt(c.siri));
    for (const auto& s : m.scores) {
      auto it = c.scores.find(s);
      row.push_back(it == c.scores.end() ? "" : csv::format_double(it->second));
    }
    csv::write_row(out, row);
  }
}

void write_cohort(const std::filesystem::path& path, const Cohort& cohort) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  write_cohort(out, cohort);
}

std::vector<std::string> check_disjoint(const Cohort& a, const Cohort& b) {
  std::set<std::string> ids_a;
  for (const auto& c : a.cases()) ids_a.insert(c.case_id);
  std::vector<std::string> shared;
  for (const auto& c : b.cases()) {
    if (ids_a.contains(c.case_id)) shared.push_back(c.case_id);
  }
  std::sort(shared.begin(), shared.end());
  return shared;
}

double prevalence(const Cohort& cohort) {
  if (cohort.empty()) throw Error(ErrorCode::EmptyCohort, "prevalence of an empty cohort");
  return static_cast<double>(cohort.positives()) / static_cast<double>(cohort.size());
}

Cohort flip_labels(const Cohort& cohort) {
  std::vector<CaseRecord> cases(cohort.cases().begin(), cohort.cases().end());
  for (auto& c : cases) c.label = 1 - c.label;
  return Cohort(std::move(cases), cohort.role());
}

Cohort with_scores(const Cohort& cohort, const std::string& name, std::span<const double> values) {
  if (values.size() != cohort.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("{} scores for {} cases", values.size(), cohort.size()));
  }
  std::vector<CaseRecord> cases(cohort.cases().begin(), cohort.cases().end());
  for (std::size_t i = 0; i < cases.size(); ++i) cases[i].scores[name] = values[i];
  return Cohort(std::move(cases), cohort.role());
}

ScoredSample scored_sample(const Cohort& cohort, const std::string& model) {
  ScoredSample s;
  bool known = false;
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto& c = cohort[i];
    auto it = c.scores.find(model);
    if (it == c.scores.end()) continue;
    known = true;
    s.scores.push_back(it->second);
    s.labels.push_back(c.label);
    s.rows.push_back(i);
  }
  if (!known) {
    throw Error(ErrorCode::MissingColumn, fmt::format("no case carries score '{}'", model));
  }
  return s;
}

PairedSample paired_sample(const Cohort& cohort, const std::string& model_a,
                           const std::string& model_b) {
  PairedSample p;
  for (const auto& c : cohort.cases()) {
    auto a = c.scores.find(model_a);
    auto b = c.scores.find(model_b);
    if (a == c.scores.end() || b == c.scores.end()) continue;
    p.scores_a.push_back(a->second);
    p.scores_b.push_back(b->second);
    p.labels.push_back(c.label);
  }
  if (p.labels.empty()) {
    throw Error(ErrorCode::MissingColumn,
                fmt::format("no case carries both '{}' and '{}'", model_a, model_b));
  }
  return p;
}

}  // namespace dxeval
