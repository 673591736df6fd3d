#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "tabcanon/canon.hpp"
#include "tabcanon/synth.hpp"
#include "tabcanon/text.hpp"

using namespace tabcanon;
using oracle::C;

namespace {

const Cell& at(const TableAnnotation& t, int r, int c) { return t.cells[static_cast<std::size_t>(build_grid(t).at(r, c))]; }

bool enforced_violation(const Violation& v) { return v.kind != ViolationKind::NonUniqueLeaf; }

TableAnnotation data_table(int rows, int cols) {
  std::vector<std::vector<std::string>> texts;
  for (int r = 0; r < rows; ++r) {
    texts.emplace_back();
    for (int c = 0; c < cols; ++c) texts.back().push_back(std::to_string(r * 10 + c));
  }
  return oracle::grid(texts, 1);
}

// Turns row `r` into a PRH: one full-width cell, or a label plus blanks.
TableAnnotation with_prh(TableAnnotation t, int r, bool split) {
  t.cells.erase(std::remove_if(t.cells.begin(), t.cells.end(), [&](const Cell& c) { return c.row_start == r; }),
                t.cells.end());
  Cell label;
  label.row_start = label.row_end = r;
  label.text = "Section";
  label.col_end = split ? 0 : t.n_cols - 1;
  t.cells.push_back(label);
  for (int c = 1; split && c < t.n_cols; ++c) {
    Cell b;
    b.row_start = b.row_end = r;
    b.col_start = b.col_end = c;
    t.cells.push_back(b);
  }
  sort_cells(t);
  return t;
}

std::vector<std::string> sorted_texts(const TableAnnotation& t) {
  std::vector<std::string> out;
  for (const auto& c : t.cells) {
    if (!c.blank()) out.push_back(text::normalize_whitespace(c.text));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("oversegmented header and PRH are merged") {
  const auto in = oracle::table(4, 3, {{0, 0, 0, 0, "Name", true}, {0, 0, 1, 2, "Group", true}, {1, 1, 0, 0, "", true},
                                       {1, 1, 1, 1, "a", true}, {1, 1, 2, 2, "b", true}, {2, 2, 0, 0, "Section"},
                                       {2, 2, 1, 1, ""}, {2, 2, 2, 2, ""}, {3, 3, 0, 0, "x"}, {3, 3, 1, 1, "1"},
                                       {3, 3, 2, 2, "2"}});
  const auto out = canonicalize(in);
  const auto& t = out.table;
  CHECK(t.cells.size() == 8);
  const Cell& name = at(t, 1, 0);
  CHECK(name.text == "Name");
  CHECK(name.row_start == 0);
  CHECK(name.row_end == 1);
  CHECK(name.is_column_header);
  const Cell& section = at(t, 2, 2);
  CHECK(section.text == "Section");
  CHECK(section.col_start == 0);
  CHECK(section.col_end == 2);
  CHECK(section.is_projected_row_header);
  CHECK_FALSE(section.is_column_header);
  CHECK(at(t, 0, 2).text == "Group");
  CHECK(out.report.changed);
  CHECK(out.report.merges_performed == 2);
  CHECK(out.report.prh_rows == std::vector<int>{2});
  CHECK(validate_canonical(t).empty());
}

TEST_CASE("canonical input is returned unchanged") {
  const auto in = oracle::table(3, 2, {{0, 0, 0, 0, "Name", true}, {0, 0, 1, 1, "Value", true}, {1, 1, 0, 1, "Section", false, true},
                                       {2, 2, 0, 0, "x"}, {2, 2, 1, 1, "1"}});
  const auto out = canonicalize(in);
  CHECK(out.table == in);
  CHECK_FALSE(out.report.changed);
  CHECK(out.report.merges_performed == 0);
  CHECK(out.report.header_rows_added == 0);
}

TEST_CASE("blank first cell makes the first row a column header") {
  const auto out = canonicalize(oracle::grid({{"", "X"}, {"a", "1"}, {"b", "2"}}));
  CHECK(column_header_rows(out.table) == 1);
  CHECK(at(out.table, 0, 1).is_column_header);
  CHECK_FALSE(at(out.table, 1, 1).is_column_header);
  CHECK(out.report.header_rows_added == 1);
  CHECK(out.report.changed);
}

TEST_CASE("header grows until every column has its own cell") {
  // row 0 spans both columns, so row 1 is needed for single-column cells
  const auto in = oracle::table(3, 2, {{0, 0, 0, 1, "Both", true}, {1, 1, 0, 0, "a"}, {1, 1, 1, 1, "b"},
                                       {2, 2, 0, 0, "1"}, {2, 2, 1, 1, "2"}});
  const auto out = canonicalize(in);
  CHECK(column_header_rows(out.table) == 2);
  CHECK(out.report.header_rows_added == 1);
}

TEST_CASE("header growth that would consume the table is reverted") {
  const auto in = oracle::table(2, 2, {{0, 0, 0, 1, "Both", true}, {1, 1, 0, 1, "Again"}});
  const auto out = canonicalize(in);
  CHECK(out.report.uncanonicalizable);
  CHECK(column_header_rows(out.table) == 1);
}

TEST_CASE("blank spanning cells are split") {
  const auto in = oracle::table(2, 4, {{0, 0, 0, 0, "a"}, {0, 0, 1, 1, "b"}, {0, 0, 2, 2, "c"}, {0, 0, 3, 3, "d"},
                                       {1, 1, 0, 0, "x"}, {1, 1, 1, 2, ""}, {1, 1, 3, 3, "y"}});
  const auto out = canonicalize(in);
  CHECK(out.table.cells.size() == 8);
  CHECK(out.report.blank_cells_split == 1);
  CHECK(out.report.changed);
}

TEST_CASE("row header absorbs blank cells below") {
  const auto in = oracle::table(4, 2, {{0, 0, 0, 0, "Name", true}, {0, 0, 1, 1, "V", true}, {1, 1, 0, 0, "Top"},
                                       {1, 1, 1, 1, "1"}, {2, 2, 0, 0, ""}, {2, 2, 1, 1, "2"}, {3, 3, 0, 0, "Next"},
                                       {3, 3, 1, 1, "3"}});
  const auto out = canonicalize(in);
  const Cell& top = at(out.table, 2, 0);
  CHECK(top.text == "Top");
  CHECK(top.row_end == 2);
  CHECK(top.is_row_header);
}

TEST_CASE("detect_prh") {
  SUBCASE("rule literal") {
    auto t = oracle::grid({{"h1", "h2", "h3"}, {"Group A", "", ""}, {"Group A", "5", ""}, {"1", "2", "3"}}, 1);
    CHECK(detect_prh(t) == std::vector<int>{1});
  }
  SUBCASE("survey mode skips the first four rows") {
    auto t = oracle::grid({{"h", "h"}, {"h", "h"}, {"Group", ""}, {"1", "2"}, {"3", "4"}, {"5", "6"}}, 2);
    CHECK(detect_prh(t, false) == std::vector<int>{2});
    CHECK(detect_prh(t, true).empty());
    CHECK_THROWS_AS(detect_prh(oracle::grid({{"a", ""}}), true), TooFewRowsError);
  }
  SUBCASE("survey mode drops trailing PRH rows") {
    auto t = oracle::grid({{"h", "h"}, {"1", "2"}, {"1", "2"}, {"1", "2"}, {"G", ""}, {"1", "2"}, {"H", ""}, {"I", ""}});
    CHECK(detect_prh(t, true) == std::vector<int>{4});
  }
}

TEST_CASE("survey counts on a synthetic corpus") {
  std::vector<TableAnnotation> corpus;
  for (int i = 0; i < 6; ++i) corpus.push_back(data_table(7, 3));
  corpus.push_back(with_prh(data_table(7, 3), 4, false));
  for (int i = 0; i < 3; ++i) corpus.push_back(with_prh(data_table(7, 3), 5, true));
  const auto s = survey_oversegmentation(corpus);
  CHECK(s == SurveyCounts{10, 4, 3});
  CHECK(s.pct_of_prh() == doctest::Approx(75.0));
  CHECK(s.pct_of_investigated() == doctest::Approx(30.0));
  CHECK(survey_oversegmentation({}) == SurveyCounts{});
  std::vector<TableAnnotation> canonical;
  for (const auto& t : corpus) canonical.push_back(canonicalize(t).table);
  CHECK(survey_oversegmentation(canonical).oversegmented == 0);
}

TEST_CASE("canonicalize properties on random tables") {
  std::mt19937_64 rng(101);
  int changed = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto in = random_table(rng);
    const auto once = canonicalize(in);
    const auto twice = canonicalize(once.table);
    CHECK(twice.table == once.table);
    CHECK_FALSE(twice.report.changed);
    CHECK_NOTHROW(build_grid(once.table));
    const auto v = validate_canonical(once.table);
    CHECK(std::none_of(v.begin(), v.end(), enforced_violation));
    CHECK(column_header_rows(once.table) >= column_header_rows(in));
    CHECK(once.report.changed == !(once.table == in));
    CHECK(once.report.changed ==
          (once.report.merges_performed + once.report.header_rows_added + once.report.prh_labels_added +
               once.report.blank_cells_split + once.report.row_header_cells_added + once.report.flags_changed >
           0));

    // merging never deletes text: every input word is still present
    std::vector<std::string> in_words, out_words;
    for (const auto& s : sorted_texts(in)) {
      for (std::size_t p = 0, q; p <= s.size(); p = q + 1) {
        q = s.find(' ', p);
        if (q == std::string::npos) q = s.size();
        in_words.push_back(s.substr(p, q - p));
      }
    }
    for (const auto& s : sorted_texts(once.table)) {
      for (std::size_t p = 0, q; p <= s.size(); p = q + 1) {
        q = s.find(' ', p);
        if (q == std::string::npos) q = s.size();
        out_words.push_back(s.substr(p, q - p));
      }
    }
    std::sort(in_words.begin(), in_words.end());
    std::sort(out_words.begin(), out_words.end());
    CHECK(in_words == out_words);
    if (once.report.changed) ++changed;
  }
  CHECK(changed > 100);
}
