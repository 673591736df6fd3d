#include "tabcanon/assemble.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "tabcanon/spatial.hpp"
#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

bool is_table(ObjectCategory c) { return c == ObjectCategory::Table || c == ObjectCategory::TableRotated; }

auto box_key(const BBox& b) { return std::make_tuple(b.x_min, b.y_min, b.x_max, b.y_max); }

// Descending score, then category, then box: a total order on distinct objects.
bool resolution_order(const AnnotatedObject& a, const AnnotatedObject& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.category != b.category) return a.category < b.category;
  return box_key(a.box) < box_key(b.box);
}

struct Interval {
  double lo, hi;
};

Interval along(const BBox& b, bool vertical) {
  return vertical ? Interval{b.y_min, b.y_max} : Interval{b.x_min, b.x_max};
}

bool duplicate_lines(const BBox& a, const BBox& b, bool vertical, double threshold) {
  const Interval x = along(a, vertical), y = along(b, vertical);
  const double shorter = std::min(x.hi - x.lo, y.hi - y.lo);
  if (shorter <= 0.0) return false;
  const double common = std::min(x.hi, y.hi) - std::max(x.lo, y.lo);
  return common >= threshold * shorter;
}

// Sorts lines by position and moves each residual overlap to its midline.
int snap_lines(std::vector<AnnotatedObject>& lines, bool vertical) {
  std::sort(lines.begin(), lines.end(), [&](const AnnotatedObject& a, const AnnotatedObject& b) {
    const Interval x = along(a.box, vertical), y = along(b.box, vertical);
    return std::tie(x.lo, x.hi) < std::tie(y.lo, y.hi);
  });
  int snapped = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    BBox& prev = lines[i - 1].box;
    BBox& next = lines[i].box;
    double& prev_hi = vertical ? prev.y_max : prev.x_max;
    double& next_lo = vertical ? next.y_min : next.x_min;
    if (prev_hi > next_lo) {
      const double mid = (prev_hi + next_lo) / 2.0;
      prev_hi = mid;
      next_lo = mid;
      ++snapped;
    }
  }
  return snapped;
}

BBox grid_cell(const BBox& row, const BBox& col) { return {col.x_min, row.y_min, col.x_max, row.y_max}; }

std::vector<int> claimed_rows(const BBox& parent, const std::vector<AnnotatedObject>& rows, double threshold) {
  std::vector<int> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (coverage(rows[r].box, parent) >= threshold) out.push_back(static_cast<int>(r));
  }
  return out;
}

std::vector<std::pair<int, int>> claimed_cells(const BBox& parent, const std::vector<AnnotatedObject>& rows,
                                               const std::vector<AnnotatedObject>& cols, double threshold) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (coverage(grid_cell(rows[r].box, cols[c].box), parent) >= threshold) {
        out.emplace_back(static_cast<int>(r), static_cast<int>(c));
      }
    }
  }
  return out;
}

template <typename T>
bool intersects(const std::set<T>& taken, const std::vector<T>& claim) {
  return std::any_of(claim.begin(), claim.end(), [&](const T& x) { return taken.count(x) > 0; });
}

}  // namespace

Resolution resolve_conflicts(const std::vector<AnnotatedObject>& objects, const AssembleOptions& options) {
  std::vector<AnnotatedObject> sorted = objects;
  std::sort(sorted.begin(), sorted.end(), resolution_order);

  Resolution res;
  std::vector<AnnotatedObject> tables, rows, cols;
  for (const auto& o : sorted) {
    if (is_table(o.category)) {
      if (tables.empty()) {
        tables.push_back(o);
      } else {
        res.suppressed.push_back({o, "second table object"});
      }
      continue;
    }
    const bool vertical = o.category == ObjectCategory::TableRow;
    if (!vertical && o.category != ObjectCategory::TableColumn) continue;
    auto& kept = vertical ? rows : cols;
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const AnnotatedObject& k) {
      return duplicate_lines(k.box, o.box, vertical, options.duplicate_overlap);
    });
    if (dup) {
      res.suppressed.push_back({o, vertical ? "duplicate row" : "duplicate column"});
    } else {
      kept.push_back(o);
    }
  }
  res.boundaries_snapped = snap_lines(rows, true) + snap_lines(cols, false);

  std::vector<AnnotatedObject> headers, prhs, spans;
  std::set<int> header_taken, prh_taken;
  std::set<std::pair<int, int>> span_taken;
  for (const auto& o : sorted) {
    switch (o.category) {
      case ObjectCategory::TableColumnHeader:
      case ObjectCategory::TableProjectedRowHeader: {
        const bool header = o.category == ObjectCategory::TableColumnHeader;
        auto& taken = header ? header_taken : prh_taken;
        const auto claim = claimed_rows(o.box, rows, options.child_overlap);
        if (intersects(taken, claim)) {
          res.suppressed.push_back({o, header ? "column header claims a claimed row"
                                              : "projected row header claims a claimed row"});
          break;
        }
        taken.insert(claim.begin(), claim.end());
        (header ? headers : prhs).push_back(o);
        break;
      }
      case ObjectCategory::TableSpanningCell: {
        const auto claim = claimed_cells(o.box, rows, cols, options.child_overlap);
        if (intersects(span_taken, claim)) {
          res.suppressed.push_back({o, "spanning cell claims a claimed grid cell"});
          break;
        }
        span_taken.insert(claim.begin(), claim.end());
        spans.push_back(o);
        break;
      }
      default:
        break;
    }
  }

  for (auto* group : {&tables, &cols, &rows, &headers, &prhs, &spans}) {
    res.objects.insert(res.objects.end(), group->begin(), group->end());
  }
  return res;
}

Assembly assemble(const std::vector<AnnotatedObject>& objects, const TokenSequence& tokens,
                  const AssembleOptions& options) {
  Resolution res = resolve_conflicts(objects, options);
  Assembly out;
  out.suppressed = res.suppressed;

  const AnnotatedObject* table_obj = nullptr;
  std::vector<AnnotatedObject> rows, cols, headers, prhs, spans;
  for (const auto& o : res.objects) {
    switch (o.category) {
      case ObjectCategory::Table:
      case ObjectCategory::TableRotated:
        table_obj = &o;
        break;
      case ObjectCategory::TableRow:
        rows.push_back(o);
        break;
      case ObjectCategory::TableColumn:
        cols.push_back(o);
        break;
      case ObjectCategory::TableColumnHeader:
        headers.push_back(o);
        break;
      case ObjectCategory::TableProjectedRowHeader:
        prhs.push_back(o);
        break;
      case ObjectCategory::TableSpanningCell:
        spans.push_back(o);
        break;
    }
  }
  if (!table_obj) throw NoTableObjectError("no table object among the detected objects");
  if (rows.empty() || cols.empty()) {
    throw DegenerateStructureError("table has " + std::to_string(rows.size()) + " rows and " +
                                   std::to_string(cols.size()) + " columns");
  }

  const int n_rows = static_cast<int>(rows.size());
  const int n_cols = static_cast<int>(cols.size());
  TableAnnotation& t = out.table;
  t.n_rows = n_rows;
  t.n_cols = n_cols;
  t.rotated = table_obj->category == ObjectCategory::TableRotated;
  t.table_box = table_obj->box;
  t.rows.emplace();
  t.columns.emplace();
  for (const auto& r : rows) t.rows->push_back(r.box);
  for (const auto& c : cols) t.columns->push_back(c.box);

  int header_rows = 0;
  for (const auto& h : headers) {
    for (int r : claimed_rows(h.box, rows, options.child_overlap)) header_rows = std::max(header_rows, r + 1);
  }
  std::vector<bool> prh_row(static_cast<std::size_t>(n_rows), false);
  if (n_cols > 1) {
    for (const auto& p : prhs) {
      for (int r : claimed_rows(p.box, rows, options.child_overlap)) {
        if (r >= header_rows) prh_row[static_cast<std::size_t>(r)] = true;
      }
    }
  }

  std::vector<int> owner(static_cast<std::size_t>(n_rows * n_cols), -1);
  auto slot = [&](int r, int c) -> int& { return owner[static_cast<std::size_t>(r * n_cols + c)]; };
  std::vector<Cell> cells;
  for (int r = 0; r < n_rows; ++r) {
    if (!prh_row[static_cast<std::size_t>(r)]) continue;
    Cell c;
    c.row_start = c.row_end = r;
    c.col_start = 0;
    c.col_end = n_cols - 1;
    c.is_projected_row_header = true;
    for (int j = 0; j < n_cols; ++j) slot(r, j) = static_cast<int>(cells.size());
    cells.push_back(c);
  }

  for (const auto& s : spans) {
    const auto claim = claimed_cells(s.box, rows, cols, options.child_overlap);
    if (claim.empty()) {
      out.suppressed.push_back({s, "spanning cell covers no grid cell"});
      continue;
    }
    int r0 = n_rows, r1 = -1, c0 = n_cols, c1 = -1;
    for (const auto& [r, c] : claim) {
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
    if (r0 == r1 && c0 == c1) continue;
    if (r0 == r1 && prh_row[static_cast<std::size_t>(r0)]) continue;  // already the PRH cell
    bool weak = false, taken = false;
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        if (coverage(grid_cell(rows[static_cast<std::size_t>(r)].box, cols[static_cast<std::size_t>(c)].box),
                     s.box) < options.span_min_coverage) {
          weak = true;
        }
        if (slot(r, c) >= 0) taken = true;
      }
    }
    if (weak || taken) {
      out.suppressed.push_back({s, weak ? "spanning cell does not cover its rectangle"
                                        : "spanning cell overlaps another cell"});
      continue;
    }
    Cell c;
    c.row_start = r0;
    c.row_end = r1;
    c.col_start = c0;
    c.col_end = c1;
    for (int r = r0; r <= r1; ++r) {
      for (int j = c0; j <= c1; ++j) slot(r, j) = static_cast<int>(cells.size());
    }
    cells.push_back(c);
  }

  for (int r = 0; r < n_rows; ++r) {
    for (int j = 0; j < n_cols; ++j) {
      if (slot(r, j) >= 0) continue;
      Cell c;
      c.row_start = c.row_end = r;
      c.col_start = c.col_end = j;
      cells.push_back(c);
    }
  }
  for (Cell& c : cells) {
    c.is_column_header = c.row_start < header_rows;
    if (c.is_column_header) c.is_projected_row_header = false;
    BBox g = grid_cell((*t.rows)[static_cast<std::size_t>(c.row_start)], (*t.columns)[static_cast<std::size_t>(c.col_start)]);
    g = hull(g, grid_cell((*t.rows)[static_cast<std::size_t>(c.row_end)], (*t.columns)[static_cast<std::size_t>(c.col_end)]));
    c.grid_box = g;
  }
  t.cells = std::move(cells);
  sort_cells(t);

  const auto assigned = assign_tokens(t, tokens);
  const auto texts = extract_cell_text(t, tokens);
  for (std::size_t k = 0; k < t.cells.size(); ++k) t.cells[k].text = texts[k];
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    if (!assigned[i] || text::is_blank(tokens.tokens[i].text)) continue;
    auto& tb = t.cells[*assigned[i]].text_box;
    tb = tb ? hull(*tb, tokens.tokens[i].box) : tokens.tokens[i].box;
  }

  (void)build_grid(t);
  out.violations = validate_canonical(t);
  return out;
}

}  // namespace tabcanon
