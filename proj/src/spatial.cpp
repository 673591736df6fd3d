#include "tabcanon/spatial.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

struct Extent {
  double lo = 0.0;
  double hi = 0.0;
};

// Extent of line `index` along one axis. `starts`/`ends` select the cell's
// first/last line on that axis, `lo`/`hi` the box edges on that axis.
template <typename Start, typename End, typename Lo, typename Hi>
std::optional<Extent> line_extent(const TableAnnotation& t, const std::vector<std::optional<BBox>>& boxes,
                                  int index, CompletionRule rule, Start starts, End ends, Lo lo, Hi hi) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo_start = inf, hi_start = -inf, lo_end = inf, hi_end = -inf;
  bool any_start = false, any_end = false;
  for (std::size_t k = 0; k < t.cells.size(); ++k) {
    if (!boxes[k]) continue;
    const Cell& c = t.cells[k];
    if (starts(c) == index) {
      any_start = true;
      lo_start = std::min(lo_start, lo(*boxes[k]));
      hi_start = std::max(hi_start, hi(*boxes[k]));
    }
    if (ends(c) == index) {
      any_end = true;
      lo_end = std::min(lo_end, lo(*boxes[k]));
      hi_end = std::max(hi_end, hi(*boxes[k]));
    }
  }
  if (!any_start && !any_end) return std::nullopt;
  if (rule == CompletionRule::Union) {
    return Extent{std::min(lo_start, lo_end), std::max(hi_start, hi_end)};
  }
  Extent e;
  e.lo = any_start ? lo_start : lo_end;
  e.hi = any_end ? hi_end : hi_start;
  if (e.hi < e.lo) {
    // spanning cells on both edges inverted the extent; use the union of both sets
    return Extent{std::min(lo_start, lo_end), std::max(hi_start, hi_end)};
  }
  return e;
}

std::optional<Extent> row_extent(const TableAnnotation& t, const std::vector<std::optional<BBox>>& boxes, int m,
                                 CompletionRule rule) {
  return line_extent(
      t, boxes, m, rule, [](const Cell& c) { return c.row_start; }, [](const Cell& c) { return c.row_end; },
      [](const BBox& b) { return b.y_min; }, [](const BBox& b) { return b.y_max; });
}

std::optional<Extent> column_extent(const TableAnnotation& t, const std::vector<std::optional<BBox>>& boxes, int n,
                                    CompletionRule rule) {
  return line_extent(
      t, boxes, n, rule, [](const Cell& c) { return c.col_start; }, [](const Cell& c) { return c.col_end; },
      [](const BBox& b) { return b.x_min; }, [](const BBox& b) { return b.x_max; });
}

void assign_grid_boxes(TableAnnotation& t) {
  const auto& rows = *t.rows;
  const auto& cols = *t.columns;
  for (Cell& c : t.cells) {
    BBox g{cols[static_cast<std::size_t>(c.col_start)].x_min, rows[static_cast<std::size_t>(c.row_start)].y_min,
           cols[static_cast<std::size_t>(c.col_start)].x_max, rows[static_cast<std::size_t>(c.row_start)].y_max};
    for (int r = c.row_start; r <= c.row_end; ++r) {
      g.y_min = std::min(g.y_min, rows[static_cast<std::size_t>(r)].y_min);
      g.y_max = std::max(g.y_max, rows[static_cast<std::size_t>(r)].y_max);
    }
    for (int j = c.col_start; j <= c.col_end; ++j) {
      g.x_min = std::min(g.x_min, cols[static_cast<std::size_t>(j)].x_min);
      g.x_max = std::max(g.x_max, cols[static_cast<std::size_t>(j)].x_max);
    }
    c.grid_box = g;
  }
}

void require_geometry(const TableAnnotation& t) {
  if (!t.rows || !t.columns || !t.table_box) {
    throw MissingBoxesError("table has no row, column or table boxes; run completion first");
  }
}

// Midpoint partition of a sequence of [lo, hi] intervals between outer edges.
std::vector<Extent> partition(const std::vector<Extent>& in, double outer_lo, double outer_hi, const char* what) {
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (!(in[i].lo > in[i - 1].lo) || !(in[i].hi > in[i - 1].hi)) {
      throw NonMonotonicError(std::string(what) + " " + std::to_string(i - 1) + " and " + std::to_string(i) +
                              " are not strictly ordered");
    }
  }
  std::vector<Extent> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i].lo = i == 0 ? outer_lo : out[i - 1].hi;
    out[i].hi = i + 1 == in.size() ? outer_hi : (in[i].hi + in[i + 1].lo) / 2.0;
  }
  return out;
}

}  // namespace

TableAnnotation complete(const TableAnnotation& table, CompletionRule rule) {
  (void)build_grid(table);
  std::vector<std::optional<BBox>> boxes;
  std::vector<BBox> present;
  for (const Cell& c : table.cells) {
    boxes.push_back(c.text_box);
    if (c.text_box) present.push_back(*c.text_box);
  }
  const auto table_box = hull(present);
  if (!table_box) throw MissingBoxesError("no cell has a text box");

  TableAnnotation out = table;
  out.table_box = *table_box;
  out.rows.emplace();
  out.columns.emplace();
  for (int m = 0; m < table.n_rows; ++m) {
    const auto e = row_extent(table, boxes, m, rule);
    if (!e) throw UndefinedExtentError(UndefinedExtentError::Axis::Row, m);
    out.rows->push_back({table_box->x_min, e->lo, table_box->x_max, e->hi});
  }
  for (int n = 0; n < table.n_cols; ++n) {
    const auto e = column_extent(table, boxes, n, rule);
    if (!e) throw UndefinedExtentError(UndefinedExtentError::Axis::Column, n);
    out.columns->push_back({e->lo, table_box->y_min, e->hi, table_box->y_max});
  }
  assign_grid_boxes(out);
  return out;
}

TableAnnotation dilate_table(const TableAnnotation& completed) {
  require_geometry(completed);
  const BBox tb = *completed.table_box;
  std::vector<Extent> ry, cx;
  for (const auto& r : *completed.rows) ry.push_back({r.y_min, r.y_max});
  for (const auto& c : *completed.columns) cx.push_back({c.x_min, c.x_max});
  const auto rows = partition(ry, tb.y_min, tb.y_max, "rows");
  const auto cols = partition(cx, tb.x_min, tb.x_max, "columns");

  TableAnnotation out = completed;
  for (std::size_t i = 0; i < rows.size(); ++i) (*out.rows)[i] = {tb.x_min, rows[i].lo, tb.x_max, rows[i].hi};
  for (std::size_t j = 0; j < cols.size(); ++j) (*out.columns)[j] = {cols[j].lo, tb.y_min, cols[j].hi, tb.y_max};
  assign_grid_boxes(out);
  return out;
}

std::vector<AnnotatedObject> dilate(const TableAnnotation& completed) {
  const TableAnnotation d = dilate_table(completed);
  std::vector<AnnotatedObject> objects;
  objects.push_back({completed.rotated ? ObjectCategory::TableRotated : ObjectCategory::Table, *d.table_box, 1.0});
  for (const auto& c : *d.columns) objects.push_back({ObjectCategory::TableColumn, c, 1.0});
  for (const auto& r : *d.rows) objects.push_back({ObjectCategory::TableRow, r, 1.0});

  const int h = column_header_rows(d);
  if (h > 0) {
    BBox header = (*d.rows)[0];
    for (int r = 1; r < h; ++r) header = hull(header, (*d.rows)[static_cast<std::size_t>(r)]);
    objects.push_back({ObjectCategory::TableColumnHeader, header, 1.0});
  }
  for (int r : projected_row_header_rows(d)) {
    objects.push_back({ObjectCategory::TableProjectedRowHeader, (*d.rows)[static_cast<std::size_t>(r)], 1.0});
  }
  TableAnnotation sorted = d;
  sort_cells(sorted);
  for (const Cell& c : sorted.cells) {
    if (c.spanning()) objects.push_back({ObjectCategory::TableSpanningCell, *c.grid_box, 1.0});
  }
  return objects;
}

std::vector<std::optional<std::size_t>> assign_tokens(const TableAnnotation& table, const TokenSequence& tokens) {
  std::vector<std::size_t> order(table.cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(table.cells[a].row_start, table.cells[a].col_start) <
           std::tie(table.cells[b].row_start, table.cells[b].col_start);
  });

  std::vector<std::optional<std::size_t>> out(tokens.tokens.size());
  for (std::size_t t = 0; t < tokens.tokens.size(); ++t) {
    const BBox& box = tokens.tokens[t].box;
    const double area = box.area();
    double best = 0.0;
    std::optional<std::size_t> owner;
    for (std::size_t k : order) {
      const auto& g = table.cells[k].grid_box;
      if (!g) continue;
      if (area <= 0.0) {
        const double cx = (box.x_min + box.x_max) / 2.0;
        const double cy = (box.y_min + box.y_max) / 2.0;
        if (cx >= g->x_min && cx <= g->x_max && cy >= g->y_min && cy <= g->y_max) {
          owner = k;
          break;
        }
        continue;
      }
      const double ov = overlap_area(box, *g);
      if (ov > best) {
        best = ov;
        owner = k;
      }
    }
    if (area > 0.0 && best < 0.5 * area) owner.reset();
    out[t] = owner;
  }
  return out;
}

std::vector<std::string> extract_cell_text(const TableAnnotation& table, const TokenSequence& tokens) {
  const auto owner = assign_tokens(table, tokens);
  std::vector<std::string> out(table.cells.size());
  const char* sep = tokens.granularity == Granularity::Word ? " " : "";
  for (std::size_t t = 0; t < tokens.tokens.size(); ++t) {
    if (!owner[t]) continue;
    std::string& s = out[*owner[t]];
    if (!s.empty()) s += sep;
    s += tokens.tokens[t].text;
  }
  for (auto& s : out) s = text::normalize_whitespace(s);
  return out;
}

Tightened tighten(const TableAnnotation& table, const TokenSequence& tokens, CompletionRule rule) {
  require_geometry(table);
  for (const Cell& c : table.cells) {
    if (!c.grid_box) throw MissingBoxesError("cell without grid box; run completion first");
  }
  const auto owner = assign_tokens(table, tokens);
  std::vector<std::optional<BBox>> boxes(table.cells.size());
  std::vector<BBox> present;
  for (std::size_t t = 0; t < tokens.tokens.size(); ++t) {
    if (!owner[t] || text::is_blank(tokens.tokens[t].text)) continue;
    auto& b = boxes[*owner[t]];
    b = b ? hull(*b, tokens.tokens[t].box) : tokens.tokens[t].box;
    present.push_back(tokens.tokens[t].box);
  }

  Tightened out;
  out.table = table;
  const BBox tb = hull(present).value_or(*table.table_box);
  out.table.table_box = tb;
  for (int m = 0; m < table.n_rows; ++m) {
    const BBox& old = (*table.rows)[static_cast<std::size_t>(m)];
    auto e = row_extent(table, boxes, m, rule);
    if (!e) {
      const double mid = (old.y_min + old.y_max) / 2.0;
      e = Extent{mid, mid};
      out.empty_rows.push_back(m);
    }
    (*out.table.rows)[static_cast<std::size_t>(m)] = {tb.x_min, e->lo, tb.x_max, e->hi};
  }
  for (int n = 0; n < table.n_cols; ++n) {
    const BBox& old = (*table.columns)[static_cast<std::size_t>(n)];
    auto e = column_extent(table, boxes, n, rule);
    if (!e) {
      const double mid = (old.x_min + old.x_max) / 2.0;
      e = Extent{mid, mid};
      out.empty_columns.push_back(n);
    }
    (*out.table.columns)[static_cast<std::size_t>(n)] = {e->lo, tb.y_min, e->hi, tb.y_max};
  }
  assign_grid_boxes(out.table);
  return out;
}

}  // namespace tabcanon
