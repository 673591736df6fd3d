#include "tabcanon/model.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

std::string describe(const std::string& prefix, const std::vector<GridPos>& positions) {
  std::ostringstream os;
  os << prefix;
  const std::size_t shown = std::min<std::size_t>(positions.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    os << (i ? ", " : " ") << '(' << positions[i].row << ',' << positions[i].col << ')';
  }
  if (positions.size() > shown) os << ", ...";
  return os.str();
}

auto position_key(const Cell& c) { return std::tuple(c.row_start, c.col_start, c.row_end, c.col_end); }

constexpr std::array<std::pair<ObjectCategory, std::string_view>, 7> kCategoryNames{{
    {ObjectCategory::Table, "table"},
    {ObjectCategory::TableRotated, "table-rotated"},
    {ObjectCategory::TableColumn, "table-column"},
    {ObjectCategory::TableRow, "table-row"},
    {ObjectCategory::TableColumnHeader, "table-column-header"},
    {ObjectCategory::TableProjectedRowHeader, "table-projected-row-header"},
    {ObjectCategory::TableSpanningCell, "table-spanning-cell"},
}};

}  // namespace

OverlapError::OverlapError(std::vector<GridPos> positions)
    : GridError(describe("grid positions claimed by more than one cell:", positions),
                std::move(positions)) {}

GapError::GapError(std::vector<GridPos> positions)
    : GridError(describe("grid positions not covered by any cell:", positions), std::move(positions)) {}

SpanOutOfRangeError::SpanOutOfRangeError(std::size_t cell_index, std::vector<GridPos> positions)
    : GridError(describe("cell " + std::to_string(cell_index) + " spans outside the grid:", positions),
                std::move(positions)) {}

UndefinedExtentError::UndefinedExtentError(Axis axis, int index)
    : Error(std::string(axis == Axis::Row ? "row " : "column ") + std::to_string(index) +
            " has no non-blank cell starting or ending in it"),
      axis_(axis),
      index_(index) {}

bool Cell::blank() const { return text::is_blank(text); }

void sort_cells(TableAnnotation& table) {
  std::stable_sort(table.cells.begin(), table.cells.end(),
                   [](const Cell& a, const Cell& b) { return position_key(a) < position_key(b); });
}

bool structurally_equal(const TableAnnotation& a, const TableAnnotation& b) {
  if (a.cells.size() != b.cells.size()) return false;
  TableAnnotation sa = a;
  TableAnnotation sb = b;
  sort_cells(sa);
  sort_cells(sb);
  return sa == sb;
}

int column_header_rows(const TableAnnotation& table) {
  int h = 0;
  for (const auto& c : table.cells) {
    if (c.is_column_header) h = std::max(h, c.row_end + 1);
  }
  return h;
}

std::vector<int> projected_row_header_rows(const TableAnnotation& table) {
  std::set<int> rows;
  for (const auto& c : table.cells) {
    if (c.is_projected_row_header) rows.insert(c.row_start);
  }
  return {rows.begin(), rows.end()};
}

bool is_complex(const TableAnnotation& table) {
  return std::any_of(table.cells.begin(), table.cells.end(), [](const Cell& c) { return c.spanning(); });
}

std::string_view category_name(ObjectCategory c) noexcept {
  for (const auto& [cat, name] : kCategoryNames) {
    if (cat == c) return name;
  }
  return "unknown";
}

std::optional<ObjectCategory> parse_category(std::string_view name) noexcept {
  for (const auto& [cat, n] : kCategoryNames) {
    if (n == name) return cat;
  }
  // Also accept the space-separated spelling used by some detectors.
  std::string dashed(name);
  std::replace(dashed.begin(), dashed.end(), ' ', '-');
  for (const auto& [cat, n] : kCategoryNames) {
    if (n == dashed) return cat;
  }
  return std::nullopt;
}

Occupancy build_grid(const std::vector<Cell>& cells, int n_rows, int n_cols) {
  if (n_rows < 0 || n_cols < 0) throw Error("negative grid dimensions");
  std::vector<int> owner(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols), -1);
  std::vector<GridPos> overlaps;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    if (c.row_start < 0 || c.col_start < 0 || c.row_end >= n_rows || c.col_end >= n_cols ||
        c.row_start > c.row_end || c.col_start > c.col_end) {
      throw SpanOutOfRangeError(k, {{c.row_start, c.col_start}, {c.row_end, c.col_end}});
    }
    for (int r = c.row_start; r <= c.row_end; ++r) {
      for (int col = c.col_start; col <= c.col_end; ++col) {
        int& slot = owner[static_cast<std::size_t>(r * n_cols + col)];
        if (slot != -1) {
          overlaps.push_back({r, col});
        } else {
          slot = static_cast<int>(k);
        }
      }
    }
  }
  if (!overlaps.empty()) {
    std::sort(overlaps.begin(), overlaps.end());
    overlaps.erase(std::unique(overlaps.begin(), overlaps.end()), overlaps.end());
    throw OverlapError(std::move(overlaps));
  }
  std::vector<GridPos> gaps;
  for (int r = 0; r < n_rows; ++r) {
    for (int col = 0; col < n_cols; ++col) {
      if (owner[static_cast<std::size_t>(r * n_cols + col)] == -1) gaps.push_back({r, col});
    }
  }
  if (!gaps.empty()) throw GapError(std::move(gaps));
  return Occupancy(n_rows, n_cols, std::move(owner));
}

HeaderTree header_tree(const TableAnnotation& table, HeaderAxis axis) {
  const Occupancy grid = build_grid(table);
  const bool by_column = axis == HeaderAxis::Column;
  auto in_header = [&](const Cell& c) { return by_column ? c.is_column_header : c.is_row_header; };

  std::vector<int> members;
  for (std::size_t k = 0; k < table.cells.size(); ++k) {
    if (in_header(table.cells[k])) members.push_back(static_cast<int>(k));
  }
  std::sort(members.begin(), members.end(), [&](int a, int b) {
    return position_key(table.cells[static_cast<std::size_t>(a)]) <
           position_key(table.cells[static_cast<std::size_t>(b)]);
  });
  std::map<int, int> node_of;  // cell index -> node index
  HeaderTree tree;
  for (int k : members) {
    const Cell& c = table.cells[static_cast<std::size_t>(k)];
    node_of[k] = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({c.row_start, c.row_end, c.col_start, c.col_end, c.text, -1, {}});
  }

  for (int k : members) {
    const Cell& c = table.cells[static_cast<std::size_t>(k)];
    std::set<int> owners;
    if (by_column && c.row_start > 0) {
      for (int j = c.col_start; j <= c.col_end; ++j) owners.insert(grid.at(c.row_start - 1, j));
    } else if (!by_column && c.col_start > 0) {
      for (int i = c.row_start; i <= c.row_end; ++i) owners.insert(grid.at(i, c.col_start - 1));
    }
    const bool any_header = std::any_of(owners.begin(), owners.end(), [&](int o) {
      return in_header(table.cells[static_cast<std::size_t>(o)]);
    });
    const int node = node_of.at(k);
    if (!any_header) {
      tree.roots.push_back(node);
      continue;
    }
    if (owners.size() > 1) {
      std::ostringstream os;
      os << "header cell at (" << c.row_start << ',' << c.col_start
         << ") straddles more than one parent cell";
      throw NotNestedError(os.str());
    }
    const int parent = node_of.at(*owners.begin());
    tree.nodes[static_cast<std::size_t>(node)].parent = parent;
    tree.nodes[static_cast<std::size_t>(parent)].children.push_back(node);
  }
  return tree;
}

std::string_view violation_name(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::StackedSameSpan: return "stacked_same_span";
    case ViolationKind::SingleChild: return "single_child";
    case ViolationKind::NonUniqueLeaf: return "non_unique_leaf";
    case ViolationKind::SplitPRH: return "split_prh";
    case ViolationKind::HeaderNotTree: return "header_not_tree";
  }
  return "unknown";
}

std::vector<Violation> validate_canonical(const TableAnnotation& table) {
  const Occupancy grid = build_grid(table);
  const int h = column_header_rows(table);
  std::vector<Violation> out;

  auto owners_below = [&](const Cell& c) {
    std::set<int> owners;
    for (int j = c.col_start; j <= c.col_end; ++j) owners.insert(grid.at(c.row_end + 1, j));
    return owners;
  };

  for (const Cell& c : table.cells) {
    if (!c.is_column_header || c.row_end + 1 >= table.n_rows) continue;
    const auto owners = owners_below(c);
    if (owners.size() != 1) continue;
    const Cell& d = table.cells[static_cast<std::size_t>(*owners.begin())];
    if (!d.is_column_header) continue;
    if (d.col_start == c.col_start && d.col_end == c.col_end) {
      out.push_back({ViolationKind::StackedSameSpan, d.row_start, d.col_start});
      out.push_back({ViolationKind::SingleChild, c.row_start, c.col_start});
    }
  }

  if (h > 0 && h <= table.n_rows) {
    for (int j = 0; j < table.n_cols; ++j) {
      const int owner = grid.at(h - 1, j);
      if (table.cells[static_cast<std::size_t>(owner)].col_span() > 1) {
        out.push_back({ViolationKind::NonUniqueLeaf, h - 1, j});
      }
    }
  }

  for (int r : projected_row_header_rows(table)) {
    std::set<int> owners;
    for (int j = 0; j < table.n_cols; ++j) owners.insert(grid.at(r, j));
    if (owners.size() > 1) out.push_back({ViolationKind::SplitPRH, r, 0});
  }

  try {
    (void)header_tree(table, HeaderAxis::Column);
  } catch (const NotNestedError&) {
    out.push_back({ViolationKind::HeaderNotTree, 0, 0});
  }
  return out;
}

}  // namespace tabcanon
