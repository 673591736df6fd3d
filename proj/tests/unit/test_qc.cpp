#include <doctest.h>

#include "support/oracles.hpp"
#include "tabcanon/qc.hpp"
#include "tabcanon/spatial.hpp"

using namespace tabcanon;
using oracle::C;

namespace {

TokenSequence chars_of(const std::string& s, double x0, double y0) {
  TokenSequence t;
  t.granularity = Granularity::Character;
  for (char ch : s) {
    t.tokens.push_back({std::string(1, ch), {x0, y0, x0 + 5, y0 + 10}});
    x0 += 5;
  }
  return t;
}

TableAnnotation rows_table(double second_top) {
  return complete(oracle::table(2, 1, {{0, 0, 0, 0, "a", false, false, BBox{0, 0, 10, 10}},
                                       {1, 1, 0, 0, "b", false, false, BBox{0, second_top, 10, 20}}}));
}

}  // namespace

TEST_CASE("check_overlap") {
  CHECK(check_overlap(rows_table(12)));
  CHECK_FALSE(check_overlap(rows_table(8)));
  CHECK(check_overlap(complete(oracle::table(1, 1, {{0, 0, 0, 0, "a", false, false, BBox{0, 0, 1, 1}}}))));
  CHECK_THROWS_AS(check_overlap(oracle::grid({{"a"}})), MissingBoxesError);
}

TEST_CASE("cell_edit_distance") {
  const auto t = complete(oracle::table(1, 1, {{0, 0, 0, 0, "hello", false, false, BBox{0, 0, 25, 10}}}));
  CHECK(cell_edit_distance(t, chars_of("hello", 0, 0)) == 0.0);
  CHECK(cell_edit_distance(t, chars_of("helo", 0, 0)) == doctest::Approx(0.2));
  const auto r = run_qc(t, chars_of("helo", 0, 0), chars_of("helo", 0, 0));
  CHECK(std::find(r.reasons.begin(), r.reasons.end(), QcReason::EditDistance) != r.reasons.end());

  // two cells with distances 0 and 0.06 average to 0.03
  std::string long_text(50, 'x');
  auto two = complete(oracle::table(1, 2, {{0, 0, 0, 0, "ab", false, false, BBox{0, 0, 10, 10}},
                                           {0, 0, 1, 1, long_text, false, false, BBox{20, 0, 270, 10}}}));
  auto toks = chars_of("ab", 0, 0);
  const auto rest = chars_of(std::string(47, 'x'), 20, 0);
  toks.tokens.insert(toks.tokens.end(), rest.tokens.begin(), rest.tokens.end());
  CHECK(cell_edit_distance(two, toks) == doctest::Approx(0.03));
}

TEST_CASE("word_containment") {
  const auto t = complete(oracle::table(1, 2, {{0, 0, 0, 0, "a", false, false, BBox{0, 0, 10, 10}},
                                               {0, 0, 1, 1, "b", false, false, BBox{20, 0, 30, 10}}}));
  TokenSequence words;
  words.tokens = {{"a", {0, 0, 10, 10}}, {"b", {20, 0, 30, 10}}};
  CHECK(word_containment(t, words).mean == 1.0);

  // grid cells are [0,10] and [20,30]; a word over [5,25] x [0,10] keeps 1/4 in each
  TokenSequence straddle;
  straddle.tokens = {{"w", {0, 0, 10, 10}}, {"w", {20, 0, 30, 10}}, {"w", {6, 0, 16, 10}}};
  CHECK(word_containment(t, straddle).mean == doctest::Approx((1.0 + 1.0 + 0.4) / 3));

  TokenSequence outside;
  outside.tokens = {{"far", {100, 100, 110, 110}}, {"edge", {30, 0, 40, 10}}};
  const auto c = word_containment(t, outside);
  CHECK(c.words == 0);
  CHECK(c.mean == 1.0);
}

TEST_CASE("count_objects") {
  CHECK(count_objects(oracle::grid({{"a", "b"}, {"c", "d"}})) == 5);
  std::vector<std::vector<std::string>> big(50, std::vector<std::string>(49, "x"));
  CHECK(count_objects(oracle::grid(big, 1)) == 101);
  TableAnnotation empty;
  CHECK(count_objects(empty) == 1);
  const auto t = oracle::table(3, 2, {{0, 0, 0, 1, "H", true}, {1, 1, 0, 1, "P", false, true}, {2, 2, 0, 0, "a"}, {2, 2, 1, 1, "b"}});
  CHECK(count_objects(t) == 1 + 3 + 2 + 1 + 1 + 2);
}

TEST_CASE("qc_verdict thresholds") {
  const QcThresholds th;
  CHECK(qc_verdict(true, 0.05, 0.9, 100, th).empty());
  CHECK(qc_verdict(true, 0.0501, 0.9, 100, th) == std::vector<QcReason>{QcReason::EditDistance});
  CHECK(qc_verdict(true, 0.0, 0.8999, 100, th) == std::vector<QcReason>{QcReason::WordContainment});
  CHECK(qc_verdict(true, 0.0, 1.0, 101, th) == std::vector<QcReason>{QcReason::ObjectCount});
  CHECK(qc_verdict(false, 0.0, 1.0, 5, th) == std::vector<QcReason>{QcReason::Overlap});
  CHECK(reason_name(QcReason::EditDistance) == "edit_distance");
}

TEST_CASE("qc is translation invariant") {
  const auto t = rows_table(12);
  auto moved = t;
  for (auto& c : moved.cells) {
    if (c.text_box) c.text_box = c.text_box->translated(100, 50);
  }
  moved = complete(moved);
  TokenSequence chars, moved_chars;
  chars.granularity = moved_chars.granularity = Granularity::Character;
  chars.tokens = {{"a", {0, 0, 10, 10}}, {"b", {0, 12, 10, 20}}};
  for (const auto& tok : chars.tokens) moved_chars.tokens.push_back({tok.text, tok.box.translated(100, 50)});
  const auto a = run_qc(t, chars, chars);
  const auto b = run_qc(moved, moved_chars, moved_chars);
  CHECK(a.mean_cell_edit_distance == b.mean_cell_edit_distance);
  CHECK(a.mean_word_containment == b.mean_word_containment);
  CHECK(a.overlap_ok == b.overlap_ok);
  CHECK(a.accepted());
}
