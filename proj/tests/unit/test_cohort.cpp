#include <doctest.h>

#include <sstream>

#include "dxeval/cohort.hpp"
#include "dxeval/csv.hpp"
#include "dxeval/error.hpp"
#include "error_code.hpp"

using namespace dxeval;

namespace {

Cohort parse(const std::string& text, ColumnMapping m = {}) {
  std::istringstream in(text);
  return parse_cohort(in, m);
}
}  // namespace

TEST_CASE("csv reader handles quotes, CRLF and a BOM") {
  std::istringstream in("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"he said \"\"hi\"\"\"\r\n\r\n2,3\n");
  const auto t = csv::read(in);
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "x,1");
  CHECK(t.rows[0][1] == "he said \"hi\"");
  CHECK(t.rows[1][1] == "3");
}

TEST_CASE("csv reader rejects ragged rows") {
  std::istringstream in("a,b\n1\n");
  CHECK(code_of([&] { csv::read(in); }) == ErrorCode::MalformedValue);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 0.95}) {
    CHECK(std::stod(csv::format_double(v)) == v);
  }
}

TEST_CASE("parse reads labels, features and scores") {
  ColumnMapping m;
  m.pct_normal = "pct";
  m.scores = {"cnn"};
  const auto c = parse("case_id,label,pct,cnn\na,1,3.5,0.9\nb,0,,0.2\nc,0,1,\n", m);
  REQUIRE(c.size() == 3);
  CHECK(c.positives() == 1);
  CHECK(c[0].pct_normal.value() == 3.5);
  CHECK_FALSE(c[1].pct_normal.has_value());
  CHECK(c[0].scores.at("cnn") == 0.9);
  CHECK_FALSE(c[2].scores.contains("cnn"));
}

TEST_CASE("parse errors carry precise codes") {
  ColumnMapping m;
  m.scores = {"s"};
  CHECK(code_of([&] { parse("case_id,label\na,1\n", m); }) == ErrorCode::MissingColumn);
  CHECK(code_of([&] { parse("case_id,label,s\na,2,0.5\n", m); }) == ErrorCode::MalformedValue);
  CHECK(code_of([&] { parse("case_id,label,s\na,yes,0.5\n", m); }) == ErrorCode::MalformedValue);
  CHECK(code_of([&] { parse("case_id,label,s\na,1,abc\n", m); }) == ErrorCode::MalformedValue);
  CHECK(code_of([&] { parse("case_id,label,s\na,1,1.5\n", m); }) == ErrorCode::MalformedValue);
  CHECK(code_of([&] { parse("case_id,label,s\na,1,nan\n", m); }) == ErrorCode::MalformedValue);
  CHECK(code_of([&] { parse("case_id,label,s\na,1,0.5\na,0,0.1\n", m); }) == ErrorCode::DuplicateCaseId);
  CHECK(code_of([&] { parse("case_id,label,s\n", m); }) == ErrorCode::EmptyCohort);
}

TEST_CASE("blood panel is all or nothing") {
  ColumnMapping m;
  m.neutrophils = "n";
  m.monocytes = "m";
  m.lymphocytes = "l";
  const auto ok = parse("case_id,label,n,m,l\na,1,4,0.5,2\nb,0,,,\n", m);
  CHECK(ok[0].blood.has_value());
  CHECK_FALSE(ok[1].blood.has_value());
  CHECK(code_of([&] { parse("case_id,label,n,m,l\na,1,4,,2\n", m); }) == ErrorCode::MalformedValue);
}

TEST_CASE("write then parse is the identity") {
  ColumnMapping m = ColumnMapping::infer(std::vector<std::string>{"pct_normal", "neutrophils", "monocytes", "lymphocytes"});
  m.scores = {"a", "b"};
  const auto c = parse(
      "case_id,label,pct_normal,neutrophils,monocytes,lymphocytes,a,b\n"
      "x,1,0.1,4.25,0.3333333333333333,1.9,0.125,\n"
      "y,0,12,3,0.5,2.5,,0.75\n",
      m);
  std::ostringstream out;
  write_cohort(out, c);
  std::istringstream back(out.str());
  CHECK(parse_cohort(back, standard_mapping(c)) == c);
}

TEST_CASE("infer fills conventional feature names only") {
  const std::vector<std::string> header{"case_id", "label", "pct_normal", "siri", "cnn", "other"};
  const auto m = ColumnMapping::infer(header);
  CHECK(m.pct_normal == "pct_normal");
  CHECK(m.siri == "siri");
  CHECK(m.scores.empty());
  CHECK(unmapped_columns(header, m) == std::vector<std::string>{"cnn", "other"});
}

TEST_CASE("disjointness and samples") {
  ColumnMapping m;
  m.scores = {"a", "b"};
  const auto c = parse("case_id,label,a,b\np,1,0.9,0.8\nq,0,0.1,\nr,0,0.3,0.4\ns,1,,0.6\n", m);
  const auto d = parse("case_id,label,a,b\nr,1,0.5,0.5\nz,0,0.5,0.5\n", m);
  CHECK(check_disjoint(c, d) == std::vector<std::string>{"r"});
  CHECK(prevalence(c) == 0.5);

  const auto a = scored_sample(c, "a");
  CHECK(a.scores == std::vector<double>{0.9, 0.1, 0.3});
  CHECK(a.labels == std::vector<int>{1, 0, 0});
  const auto p = paired_sample(c, "a", "b");
  CHECK(p.labels == std::vector<int>{1, 0});
  CHECK(code_of([&] { scored_sample(c, "zzz"); }) == ErrorCode::MissingColumn);

  const auto flipped = flip_labels(c);
  CHECK(flipped.positives() == c.negatives());
  CHECK(code_of([&] { with_scores(c, "x", std::vector<double>{0.1}); }) == ErrorCode::LengthMismatch);
}
