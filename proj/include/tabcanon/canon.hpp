#pragma once

#include <span>
#include <vector>

#include "tabcanon/model.hpp"

namespace tabcanon {

/// Net effect of canonicalize, measured as output against input.
struct CanonReport {
  int merges_performed = 0;        // output spanning cells that did not exist in the input
  int header_rows_added = 0;
  std::vector<int> prh_rows;       // projected-row-header rows of the output
  int prh_labels_added = 0;
  int blank_cells_split = 0;       // blank spanning input cells left split
  int body_blank_cells_split = 0;  // ... of which below the column header
  int row_header_cells_added = 0;
  int flags_changed = 0;           // cells kept as-is apart from header flags
  bool uncanonicalizable = false;  // header extension would have consumed every row
  bool changed = false;
};

struct CanonResult {
  TableAnnotation table;
  CanonReport report;
};

/// Header inference, projected-row-header labeling and oversegmentation
/// merges. Derived geometry (rows, columns, table and grid boxes) is dropped
/// when the structure changes; text boxes of merged cells are combined.
CanonResult canonicalize(const TableAnnotation& table);

/// Rows with exactly one non-blank cell, in the first column and confined to
/// the row, every other cell in the row being blank. Normal mode searches
/// below the flagged column header. Survey mode ignores header flags, needs at
/// least five rows (TooFewRowsError), skips rows 0-3 and drops detections that
/// form the table's trailing rows.
std::vector<int> detect_prh(const TableAnnotation& table, bool survey_mode = false);

/// True when the row holds at least one blank cell.
bool row_has_blank_cell(const TableAnnotation& table, int row);

struct SurveyCounts {
  long long investigated = 0;
  long long with_prh = 0;
  long long oversegmented = 0;

  double pct_of_prh() const noexcept {
    return with_prh == 0 ? 0.0 : 100.0 * static_cast<double>(oversegmented) / static_cast<double>(with_prh);
  }
  double pct_of_investigated() const noexcept {
    return investigated == 0 ? 0.0
                             : 100.0 * static_cast<double>(oversegmented) / static_cast<double>(investigated);
  }
  SurveyCounts& operator+=(const SurveyCounts& o) noexcept {
    investigated += o.investigated;
    with_prh += o.with_prh;
    oversegmented += o.oversegmented;
    return *this;
  }
  friend bool operator==(const SurveyCounts&, const SurveyCounts&) = default;
};

/// Survey of one table; tables with fewer than five rows count as not investigated.
SurveyCounts survey_table(const TableAnnotation& table);
SurveyCounts survey_oversegmentation(std::span<const TableAnnotation> tables);

}  // namespace tabcanon
