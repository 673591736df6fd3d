#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabcanon/bbox.hpp"
#include "tabcanon/errors.hpp"

namespace tabcanon {

/// One logical cell. Spans are 0-based and inclusive.
struct Cell {
  int row_start = 0;
  int row_end = 0;
  int col_start = 0;
  int col_end = 0;
  std::string text;
  bool is_column_header = false;
  bool is_projected_row_header = false;
  bool is_row_header = false;
  std::optional<BBox> text_box;
  std::optional<BBox> grid_box;

  bool blank() const;
  bool spanning() const noexcept { return row_end > row_start || col_end > col_start; }
  int row_span() const noexcept { return row_end - row_start + 1; }
  int col_span() const noexcept { return col_end - col_start + 1; }
  bool covers(int row, int col) const noexcept {
    return row >= row_start && row <= row_end && col >= col_start && col <= col_end;
  }
  bool same_span(const Cell& o) const noexcept {
    return row_start == o.row_start && row_end == o.row_end && col_start == o.col_start &&
           col_end == o.col_end;
  }

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct TableAnnotation {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<Cell> cells;
  std::optional<std::vector<BBox>> rows;
  std::optional<std::vector<BBox>> columns;
  std::optional<BBox> table_box;
  bool rotated = false;

  friend bool operator==(const TableAnnotation&, const TableAnnotation&) = default;
};

/// Cells ordered by (row_start, col_start); the order every transform emits.
void sort_cells(TableAnnotation& table);

/// Equality that ignores cell order.
bool structurally_equal(const TableAnnotation& a, const TableAnnotation& b);

/// Number of leading rows holding column-header cells (1 + last header row).
int column_header_rows(const TableAnnotation& table);

/// Rows that contain a projected-row-header cell, ascending.
std::vector<int> projected_row_header_rows(const TableAnnotation& table);

/// A table is complex when at least one cell spans more than one grid position.
bool is_complex(const TableAnnotation& table);

enum class ObjectCategory {
  Table,
  TableRotated,
  TableColumn,
  TableRow,
  TableColumnHeader,
  TableProjectedRowHeader,
  TableSpanningCell,
};

std::string_view category_name(ObjectCategory c) noexcept;
std::optional<ObjectCategory> parse_category(std::string_view name) noexcept;

struct AnnotatedObject {
  ObjectCategory category = ObjectCategory::Table;
  BBox box;
  double score = 1.0;
  friend bool operator==(const AnnotatedObject&, const AnnotatedObject&) = default;
};

/// Grid position -> index into the cell list. Construct with build_grid.
class Occupancy {
 public:
  Occupancy() = default;
  Occupancy(int n_rows, int n_cols, std::vector<int> owner)
      : n_rows_(n_rows), n_cols_(n_cols), owner_(std::move(owner)) {}

  int n_rows() const noexcept { return n_rows_; }
  int n_cols() const noexcept { return n_cols_; }
  int at(int row, int col) const { return owner_.at(static_cast<std::size_t>(row * n_cols_ + col)); }

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> owner_;
};

/// Throws SpanOutOfRangeError, OverlapError or GapError.
Occupancy build_grid(const std::vector<Cell>& cells, int n_rows, int n_cols);
inline Occupancy build_grid(const TableAnnotation& t) { return build_grid(t.cells, t.n_rows, t.n_cols); }

enum class HeaderAxis { Column, Row };

struct HeaderNode {
  int row_start = 0;
  int row_end = 0;
  int col_start = 0;
  int col_end = 0;
  std::string text;
  int parent = -1;  // index into HeaderTree::nodes, -1 for roots
  std::vector<int> children;
  friend bool operator==(const HeaderNode&, const HeaderNode&) = default;
};

/// Header cells as a forest. Nodes are ordered by position, so the tree does
/// not depend on the order of the input cell list.
struct HeaderTree {
  std::vector<HeaderNode> nodes;
  std::vector<int> roots;
  friend bool operator==(const HeaderTree&, const HeaderTree&) = default;
};

/// Column axis: parent is the header cell directly above the child's span.
/// Row axis: parent is the row-header cell directly left of it.
/// Throws NotNestedError when a span straddles two would-be parents.
HeaderTree header_tree(const TableAnnotation& table, HeaderAxis axis);

enum class ViolationKind {
  StackedSameSpan,   // a header node split into stacked same-span cells
  SingleChild,       // internal header node with one child
  NonUniqueLeaf,     // body column without its own header leaf
  SplitPRH,          // projected row header split over several cells
  HeaderNotTree,
};

std::string_view violation_name(ViolationKind k) noexcept;

struct Violation {
  ViolationKind kind;
  int row = 0;
  int col = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_canonical(const TableAnnotation& table);

}  // namespace tabcanon
