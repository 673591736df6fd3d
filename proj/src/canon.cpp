#include "tabcanon/canon.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

using SpanKey = std::tuple<int, int, int, int>;

SpanKey key_of(const Cell& c) { return {c.row_start, c.col_start, c.row_end, c.col_end}; }

// Distinct cell indices occupying `row`, left to right.
std::vector<int> row_owners(const Occupancy& grid, int row) {
  std::vector<int> out;
  for (int j = 0; j < grid.n_cols(); ++j) {
    const int o = grid.at(row, j);
    if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  }
  return out;
}

bool prh_rule(const std::vector<Cell>& cells, const Occupancy& grid, int row) {
  if (grid.n_cols() < 2) return false;
  int non_blank = -1;
  for (int o : row_owners(grid, row)) {
    if (cells[static_cast<std::size_t>(o)].blank()) continue;
    if (non_blank != -1) return false;
    non_blank = o;
  }
  if (non_blank == -1) return false;
  const Cell& c = cells[static_cast<std::size_t>(non_blank)];
  return c.col_start == 0 && c.row_start == row && c.row_end == row;
}

std::string join_texts(std::vector<const Cell*> parts) {
  std::sort(parts.begin(), parts.end(), [](const Cell* a, const Cell* b) {
    return std::tie(a->row_start, a->col_start) < std::tie(b->row_start, b->col_start);
  });
  std::string out;
  for (const Cell* p : parts) {
    const std::string t = text::normalize_whitespace(p->text);
    if (t.empty()) continue;
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const TableAnnotation& in) : n_rows_(in.n_rows), n_cols_(in.n_cols), cells_(in.cells) {
    header_rows_ = column_header_rows(in);
  }

  void run(CanonReport& report) {
    split_blank_spanning_cells();
    infer_column_header(report);
    label_prh_rows();
    infer_row_header();
    merge_column_header();
    merge_prh_rows();
    merge_row_header();
    assign_final_flags();
  }

  std::vector<Cell> take_cells() { return std::move(cells_); }
  int header_rows() const noexcept { return header_rows_; }

 private:
  const Occupancy& grid() {
    if (dirty_) {
      grid_ = build_grid(cells_, n_rows_, n_cols_);
      dirty_ = false;
    }
    return grid_;
  }

  const Cell& cell(int idx) const { return cells_[static_cast<std::size_t>(idx)]; }

  void split_blank_spanning_cells() {
    std::vector<Cell> out;
    for (const Cell& c : cells_) {
      if (!c.spanning() || !c.blank()) {
        out.push_back(c);
        continue;
      }
      for (int r = c.row_start; r <= c.row_end; ++r) {
        for (int j = c.col_start; j <= c.col_end; ++j) {
          Cell piece;
          piece.row_start = piece.row_end = r;
          piece.col_start = piece.col_end = j;
          piece.is_column_header = c.is_column_header;
          piece.is_row_header = c.is_row_header;
          out.push_back(std::move(piece));
        }
      }
    }
    cells_ = std::move(out);
    dirty_ = true;
  }

  // Extends `h` until no cell straddles the header/body boundary.
  int close_header(int h) const {
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Cell& c : cells_) {
        if (c.row_start < h && c.row_end >= h) {
          h = c.row_end + 1;
          grew = true;
        }
      }
    }
    return h;
  }

  bool header_columns_anchored(int h) const {
    for (int j = 0; j < n_cols_; ++j) {
      bool anchored = false;
      bool all_blank = true;
      for (const Cell& c : cells_) {
        if (c.row_start >= h || j < c.col_start || j > c.col_end) continue;
        const bool blank = c.blank();
        all_blank = all_blank && blank;
        if (!blank && c.col_start == j && c.col_end == j) anchored = true;
      }
      if (!anchored && !all_blank) return false;
    }
    return true;
  }

  void infer_column_header(CanonReport& report) {
    int h = close_header(header_rows_);
    if (n_rows_ > 0 && n_cols_ > 0 && cell(grid().at(0, 0)).blank()) h = std::max(h, close_header(1));
    if (h > 0) {
      const int before_extension = h;
      while (!header_columns_anchored(h)) {
        const int next = close_header(h + 1);
        if (next >= n_rows_) {
          report.uncanonicalizable = true;
          h = before_extension;
          break;
        }
        h = next;
      }
    }
    header_rows_ = h;
    for (Cell& c : cells_) c.is_column_header = c.row_start < h;
  }

  void label_prh_rows() {
    for (Cell& c : cells_) c.is_projected_row_header = false;
    for (int r = header_rows_; r < n_rows_; ++r) {
      if (!prh_rule(cells_, grid(), r)) continue;
      prh_rows_.insert(r);
      for (int o : row_owners(grid(), r)) {
        Cell& c = cells_[static_cast<std::size_t>(o)];
        if (!c.blank()) c.is_projected_row_header = true;
      }
    }
  }

  bool in_prh_row(const Cell& c) const {
    for (int r = c.row_start; r <= c.row_end; ++r) {
      if (prh_rows_.count(r)) return true;
    }
    return false;
  }

  void infer_row_header() {
    bool fires = false;
    for (const Cell& c : cells_) {
      if (c.col_start != 0 || c.row_start < header_rows_ || in_prh_row(c)) continue;
      if (c.spanning() || c.blank()) fires = true;
    }
    for (Cell& c : cells_) {
      if (c.is_column_header || in_prh_row(c)) {
        c.is_row_header = false;
      } else if (fires && c.col_start == 0) {
        c.is_row_header = true;
      }
    }
  }

  // Replaces the given cells by their rectangular union.
  void merge(std::vector<int> parts) {
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    Cell merged = cell(parts.front());
    std::vector<const Cell*> pieces;
    std::optional<BBox> box;
    for (int p : parts) {
      const Cell& c = cell(p);
      pieces.push_back(&c);
      merged.row_start = std::min(merged.row_start, c.row_start);
      merged.row_end = std::max(merged.row_end, c.row_end);
      merged.col_start = std::min(merged.col_start, c.col_start);
      merged.col_end = std::max(merged.col_end, c.col_end);
      merged.is_row_header = merged.is_row_header || c.is_row_header;
      if (c.text_box) box = box ? hull(*box, *c.text_box) : *c.text_box;
    }
    merged.text = join_texts(pieces);
    merged.text_box = merged.blank() ? std::nullopt : box;
    merged.grid_box.reset();
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) cells_.erase(cells_.begin() + *it);
    cells_.push_back(std::move(merged));
    dirty_ = true;
  }

  // Cells directly below (`below`) or above `c` across its columns, if they
  // are all blank-eligible and together with `c` form a rectangle.
  std::optional<std::vector<int>> vertical_neighbours(const Cell& c, bool below, bool need_blank,
                                                      bool need_header) {
    const int row = below ? c.row_end + 1 : c.row_start - 1;
    if (row < 0 || row >= n_rows_) return std::nullopt;
    std::vector<int> owners;
    for (int j = c.col_start; j <= c.col_end; ++j) {
      const int o = grid().at(row, j);
      if (std::find(owners.begin(), owners.end(), o) == owners.end()) owners.push_back(o);
    }
    const Cell& first = cell(owners.front());
    for (int o : owners) {
      const Cell& n = cell(o);
      if (n.col_start < c.col_start || n.col_end > c.col_end) return std::nullopt;
      if (below ? n.row_end != first.row_end : n.row_start != first.row_start) return std::nullopt;
      if (need_blank && !n.blank()) return std::nullopt;
      if (need_header && !n.is_column_header) return std::nullopt;
      if (!n.is_column_header && n.is_projected_row_header) return std::nullopt;
    }
    return owners;
  }

  std::vector<int> ordered_indices() const {
    std::vector<int> idx(cells_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return key_of(cell(a)) < key_of(cell(b)); });
    return idx;
  }

  bool merge_stacked_same_span() {
    for (int i : ordered_indices()) {
      const Cell& c = cell(i);
      if (!c.is_column_header) continue;
      auto below = vertical_neighbours(c, true, false, true);
      if (!below || below->size() != 1) continue;
      const Cell& d = cell(below->front());
      if (d.col_start == c.col_start && d.col_end == c.col_end) {
        merge({i, below->front()});
        return true;
      }
    }
    return false;
  }

  bool merge_blank_below_in_header() {
    for (int i : ordered_indices()) {
      const Cell& c = cell(i);
      if (!c.is_column_header) continue;
      auto below = vertical_neighbours(c, true, true, true);
      if (!below) continue;
      below->push_back(i);
      merge(*below);
      return true;
    }
    return false;
  }

  bool merge_blank_above_in_header() {
    for (int i : ordered_indices()) {
      const Cell& c = cell(i);
      if (!c.is_column_header) continue;
      auto above = vertical_neighbours(c, false, true, true);
      if (!above) continue;
      above->push_back(i);
      merge(*above);
      return true;
    }
    return false;
  }

  void merge_column_header() {
    while (merge_stacked_same_span() || merge_blank_below_in_header() || merge_blank_above_in_header()) {
    }
  }

  void merge_prh_rows() {
    for (int r : prh_rows_) {
      const auto owners = row_owners(grid(), r);
      if (owners.size() > 1) merge(owners);
      for (Cell& c : cells_) {
        if (c.row_start == r && c.row_end == r) c.is_projected_row_header = true;
      }
    }
  }

  bool merge_one_row_header_cell() {
    for (int i : ordered_indices()) {
      const Cell& c = cell(i);
      if (!c.is_row_header) continue;
      auto below = vertical_neighbours(c, true, true, false);
      if (!below) continue;
      const bool body = std::none_of(below->begin(), below->end(), [&](int o) {
        return cell(o).is_column_header || in_prh_row(cell(o));
      });
      if (!body) continue;
      below->push_back(i);
      merge(*below);
      return true;
    }
    return false;
  }

  void merge_row_header() {
    while (merge_one_row_header_cell()) {
    }
  }

  void assign_final_flags() {
    for (Cell& c : cells_) {
      c.is_column_header = c.row_start < header_rows_;
      c.is_projected_row_header = !c.is_column_header && c.row_start == c.row_end && prh_rows_.count(c.row_start) &&
                                  c.col_start == 0 && c.col_end == n_cols_ - 1;
      if (c.is_column_header || c.is_projected_row_header) c.is_row_header = false;
    }
  }

  int n_rows_;
  int n_cols_;
  std::vector<Cell> cells_;
  int header_rows_ = 0;
  std::set<int> prh_rows_;
  Occupancy grid_;
  bool dirty_ = true;
};

bool same_flags(const Cell& a, const Cell& b) {
  return a.is_column_header == b.is_column_header && a.is_projected_row_header == b.is_projected_row_header &&
         a.is_row_header == b.is_row_header;
}

}  // namespace

CanonResult canonicalize(const TableAnnotation& table) {
  (void)build_grid(table);
  CanonReport report;
  Canonicalizer work(table);
  work.run(report);

  TableAnnotation out = table;
  out.cells = work.take_cells();
  sort_cells(out);

  std::map<SpanKey, const Cell*> before;
  for (const Cell& c : table.cells) before[key_of(c)] = &c;
  std::set<SpanKey> after;
  for (const Cell& c : out.cells) {
    after.insert(key_of(c));
    auto it = before.find(key_of(c));
    if (it == before.end()) {
      if (c.spanning()) ++report.merges_performed;
      if (c.is_row_header) ++report.row_header_cells_added;
      continue;
    }
    if (!same_flags(c, *it->second)) ++report.flags_changed;
    if (c.is_row_header && !it->second->is_row_header) ++report.row_header_cells_added;
  }
  for (const Cell& c : table.cells) {
    if (!after.count(key_of(c)) && c.spanning() && c.blank()) {
      ++report.blank_cells_split;
      if (!c.is_column_header && c.row_start >= work.header_rows()) ++report.body_blank_cells_split;
    }
  }
  report.header_rows_added = work.header_rows() - column_header_rows(table);
  report.prh_rows = projected_row_header_rows(out);
  const auto old_prh = projected_row_header_rows(table);
  for (int r : report.prh_rows) {
    if (!std::binary_search(old_prh.begin(), old_prh.end(), r)) ++report.prh_labels_added;
  }

  // Geometry is untouched when nothing but cell order differs.
  TableAnnotation comparable = out;
  for (std::size_t k = 0; k < comparable.cells.size(); ++k) {
    if (auto it = before.find(key_of(comparable.cells[k])); it != before.end()) {
      comparable.cells[k].grid_box = it->second->grid_box;
    }
  }
  report.changed = !structurally_equal(comparable, table);
  if (!report.changed) return {table, report};

  out.rows.reset();
  out.columns.reset();
  out.table_box.reset();
  for (Cell& c : out.cells) c.grid_box.reset();
  return {out, report};
}

std::vector<int> detect_prh(const TableAnnotation& table, bool survey_mode) {
  const Occupancy grid = build_grid(table);
  std::vector<int> out;
  if (!survey_mode) {
    for (int r = column_header_rows(table); r < table.n_rows; ++r) {
      if (prh_rule(table.cells, grid, r)) out.push_back(r);
    }
    return out;
  }
  if (table.n_rows < 5) throw TooFewRowsError("survey needs at least five rows");
  for (int r = 4; r < table.n_rows; ++r) {
    if (prh_rule(table.cells, grid, r)) out.push_back(r);
  }
  int last = table.n_rows - 1;
  while (!out.empty() && out.back() == last) {
    out.pop_back();
    --last;
  }
  return out;
}

bool row_has_blank_cell(const TableAnnotation& table, int row) {
  const Occupancy grid = build_grid(table);
  for (int o : row_owners(grid, row)) {
    if (table.cells[static_cast<std::size_t>(o)].blank()) return true;
  }
  return false;
}

SurveyCounts survey_table(const TableAnnotation& table) {
  SurveyCounts s;
  if (table.n_rows < 5) return s;
  s.investigated = 1;
  const auto rows = detect_prh(table, true);
  if (rows.empty()) return s;
  s.with_prh = 1;
  const bool split = std::any_of(rows.begin(), rows.end(), [&](int r) { return row_has_blank_cell(table, r); });
  if (split) s.oversegmented = 1;
  return s;
}

SurveyCounts survey_oversegmentation(std::span<const TableAnnotation> tables) {
  SurveyCounts total;
  for (const auto& t : tables) total += survey_table(t);
  return total;
}

}  // namespace tabcanon
