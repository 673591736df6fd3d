#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "tabcanon/assemble.hpp"
#include "tabcanon/canon.hpp"
#include "tabcanon/qc.hpp"
#include "tabcanon/spatial.hpp"
#include "tabcanon/synth.hpp"

using namespace tabcanon;

namespace {

AnnotatedObject obj(ObjectCategory c, BBox b, double score = 1.0) { return {c, b, score}; }

std::vector<AnnotatedObject> grid_objects(int rows, int cols) {
  std::vector<AnnotatedObject> out{obj(ObjectCategory::Table, {0, 0, 10.0 * cols, 10.0 * rows})};
  for (int r = 0; r < rows; ++r) out.push_back(obj(ObjectCategory::TableRow, {0, 10.0 * r, 10.0 * cols, 10.0 * r + 10}));
  for (int c = 0; c < cols; ++c) out.push_back(obj(ObjectCategory::TableColumn, {10.0 * c, 0, 10.0 * c + 10, 10.0 * rows}));
  return out;
}

bool same_logical_structure(const TableAnnotation& a, const TableAnnotation& b) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols || a.cells.size() != b.cells.size()) return false;
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const Cell& x = a.cells[k];
    const Cell& y = b.cells[k];
    if (!x.same_span(y) || x.text != y.text || x.is_column_header != y.is_column_header ||
        x.is_projected_row_header != y.is_projected_row_header) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("non-overlapping rows are unchanged") {
  const auto objs = grid_objects(2, 2);
  const auto r = resolve_conflicts(objs);
  CHECK(r.suppressed.empty());
  CHECK(r.boundaries_snapped == 0);
  CHECK(r.objects.size() == objs.size());
}

TEST_CASE("rows overlapping by 30 percent are snapped to the overlap midline") {
  std::vector<AnnotatedObject> objs{obj(ObjectCategory::Table, {0, 0, 10, 17}), obj(ObjectCategory::TableRow, {0, 0, 10, 10}, 0.9),
                                    obj(ObjectCategory::TableRow, {0, 7, 10, 17}, 0.8)};
  const auto r = resolve_conflicts(objs);
  CHECK(r.suppressed.empty());
  CHECK(r.boundaries_snapped == 1);
  std::vector<BBox> rows;
  for (const auto& o : r.objects) {
    if (o.category == ObjectCategory::TableRow) rows.push_back(o.box);
  }
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == BBox{0, 0, 10, 8.5});
  CHECK(rows[1] == BBox{0, 8.5, 10, 17});
}

TEST_CASE("conflicting spanning cells keep the higher score") {
  auto objs = grid_objects(2, 2);
  objs.push_back(obj(ObjectCategory::TableSpanningCell, {0, 0, 20, 10}, 0.6));
  objs.push_back(obj(ObjectCategory::TableSpanningCell, {0, 0, 10, 20}, 0.9));
  const auto r = resolve_conflicts(objs);
  REQUIRE(r.suppressed.size() == 1);
  CHECK(r.suppressed[0].object.score == 0.6);
  const auto t = assemble(objs, {}).table;
  CHECK(t.cells.size() == 3);
  CHECK(build_grid(t).at(1, 0) == build_grid(t).at(0, 0));
}

TEST_CASE("spanning cell coverage is rectangularized") {
  auto objs = grid_objects(2, 2);
  // covers (0,0) and (0,1) at 0.9, (1,0) and (1,1) at 0.36
  objs.push_back(obj(ObjectCategory::TableSpanningCell, {1, 0, 19, 14}));
  const auto t = objects_to_table(objs, {});
  const auto g = build_grid(t);
  CHECK(g.at(0, 0) == g.at(0, 1));
  CHECK(g.at(1, 0) != g.at(0, 0));
  CHECK(t.cells.size() == 3);
}

TEST_CASE("spurious low-confidence duplicate row is suppressed") {
  auto objs = grid_objects(3, 2);
  objs.push_back(obj(ObjectCategory::TableRow, {0, 10.5, 20, 20.5}, 0.3));
  const auto a = assemble(objs, {});
  CHECK(a.table.n_rows == 3);
  REQUIRE(a.suppressed.size() == 1);
  CHECK(a.suppressed[0].object.category == ObjectCategory::TableRow);
  CHECK(a.table.cells == objects_to_table(grid_objects(3, 2), {}).cells);
}

TEST_CASE("headers, PRHs and text come from containment") {
  auto objs = grid_objects(3, 2);
  objs.push_back(obj(ObjectCategory::TableColumnHeader, {0, 0, 20, 10}));
  objs.push_back(obj(ObjectCategory::TableProjectedRowHeader, {0, 10, 20, 20}));
  TokenSequence words;
  words.tokens = {{"Name", {1, 1, 8, 8}}, {"Val", {11, 1, 18, 8}}, {"Group", {1, 11, 9, 18}}, {"A", {2, 12, 4, 18}},
                  {"x", {1, 21, 5, 28}}, {"1", {11, 21, 15, 28}}};
  const auto a = assemble(objs, words);
  const auto& t = a.table;
  REQUIRE(t.cells.size() == 5);
  CHECK(t.cells[0].is_column_header);
  CHECK(t.cells[0].text == "Name");
  CHECK(t.cells[2].is_projected_row_header);
  CHECK(t.cells[2].col_end == 1);
  CHECK(t.cells[2].text == "Group A");
  CHECK(t.cells[2].text_box == BBox{1, 11, 9, 18});
  CHECK(a.violations.empty());
}

TEST_CASE("violations are reported, not repaired") {
  auto objs = grid_objects(3, 2);
  objs.push_back(obj(ObjectCategory::TableColumnHeader, {0, 0, 20, 20}));
  objs.push_back(obj(ObjectCategory::TableSpanningCell, {0, 0, 20, 10}));
  objs.push_back(obj(ObjectCategory::TableSpanningCell, {0, 10, 20, 20}));
  TokenSequence words;
  words.tokens = {{"Top", {1, 1, 8, 8}}, {"Again", {1, 11, 8, 18}}};
  const auto a = assemble(objs, words);
  CHECK(std::any_of(a.violations.begin(), a.violations.end(),
                    [](const Violation& v) { return v.kind == ViolationKind::StackedSameSpan; }));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(assemble({obj(ObjectCategory::TableRow, {0, 0, 1, 1})}, {}), NoTableObjectError);
  CHECK_THROWS_AS(assemble({obj(ObjectCategory::Table, {0, 0, 1, 1}), obj(ObjectCategory::TableRow, {0, 0, 1, 1})}, {}),
                  DegenerateStructureError);
}

TEST_CASE("round trip through dilated objects, independent of object order") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int n = 0; n < 300; ++n) {
    const auto r = render_table(random_table(rng));
    TableAnnotation t;
    std::vector<AnnotatedObject> objs;
    try {
      t = complete(canonicalize(complete(r.table)).table);
      if (!run_qc(t, r.chars, r.words).accepted()) continue;
      objs = dilate(t);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const auto back = objects_to_table(objs, r.words);
    CHECK(same_logical_structure(back, t));
    auto shuffled = objs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(objects_to_table(shuffled, r.words) == back);
  }
  CHECK(checked > 100);
}
