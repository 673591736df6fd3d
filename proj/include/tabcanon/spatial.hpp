#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tabcanon/ingest.hpp"
#include "tabcanon/model.hpp"

namespace tabcanon {

/// How a row's vertical extent (and a column's horizontal extent) is derived
/// from the text boxes of cells that start or end in it.
enum class CompletionRule {
  /// Top edge from cells starting in the row, bottom edge from cells ending
  /// in it. A spanning cell then touches only its outer rows' outer edges.
  EdgeSplit,
  /// Hull of every cell starting or ending in the row.
  Union,
};

/// Fills table_box, rows, columns and every cell's grid_box from text boxes.
/// Throws MissingBoxesError when no cell has a text box and
/// UndefinedExtentError for a row/column with no boxed cell starting or ending in it.
TableAnnotation complete(const TableAnnotation& table, CompletionRule rule = CompletionRule::EdgeSplit);

/// Moves every pair of facing row (column) edges to their midpoint so rows and
/// columns partition the table box. Grid boxes are recomputed.
/// Throws NonMonotonicError when row or column extents are not strictly ordered.
TableAnnotation dilate_table(const TableAnnotation& completed);

/// The structure objects of a completed table, with dilated boxes:
/// table, columns, rows, column header, projected row headers, spanning cells.
std::vector<AnnotatedObject> dilate(const TableAnnotation& completed);

/// Token -> cell index, by largest overlap with the cells' grid boxes.
/// A token is assigned only when that cell covers at least half its area.
std::vector<std::optional<std::size_t>> assign_tokens(const TableAnnotation& table, const TokenSequence& tokens);

/// Per-cell text read from the tokens assigned to it, in token order.
std::vector<std::string> extract_cell_text(const TableAnnotation& table, const TokenSequence& tokens);

struct Tightened {
  TableAnnotation table;
  std::vector<int> empty_rows;     // kept as zero-height boxes at their midline
  std::vector<int> empty_columns;  // kept as zero-width boxes at their midline
};

/// Shrinks rows vertically and columns horizontally to the text they contain.
/// Cell membership of every token is unchanged.
Tightened tighten(const TableAnnotation& table, const TokenSequence& tokens,
                  CompletionRule rule = CompletionRule::EdgeSplit);

}  // namespace tabcanon
