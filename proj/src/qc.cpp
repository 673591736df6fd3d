#include "tabcanon/qc.hpp"

#include <algorithm>

#include "tabcanon/spatial.hpp"
#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

bool any_overlap(const std::vector<BBox>& boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (overlap_area(boxes[i], boxes[j]) > 0.0) return true;
    }
  }
  return false;
}

}  // namespace

std::string_view reason_name(QcReason r) noexcept {
  switch (r) {
    case QcReason::Overlap: return "overlap";
    case QcReason::EditDistance: return "edit_distance";
    case QcReason::WordContainment: return "word_containment";
    case QcReason::ObjectCount: return "object_count";
  }
  return "unknown";
}

bool check_overlap(const TableAnnotation& table) {
  if (!table.rows || !table.columns) throw MissingBoxesError("overlap check needs row and column boxes");
  return !any_overlap(*table.rows) && !any_overlap(*table.columns);
}

double cell_edit_distance(const TableAnnotation& table, const TokenSequence& tokens) {
  if (table.cells.empty()) return 0.0;
  const auto extracted = extract_cell_text(table, tokens);
  double total = 0.0;
  for (std::size_t k = 0; k < table.cells.size(); ++k) {
    total += text::normalized_edit_distance(text::non_whitespace(table.cells[k].text),
                                            text::non_whitespace(extracted[k]));
  }
  return total / static_cast<double>(table.cells.size());
}

Containment word_containment(const TableAnnotation& table, const TokenSequence& words) {
  if (!table.table_box) throw MissingBoxesError("containment needs a table box");
  Containment out;
  double total = 0.0;
  for (const Token& w : words.tokens) {
    if (w.box.area() <= 0.0 || overlap_area(w.box, *table.table_box) <= 0.0) continue;
    double best = 0.0;
    for (const Cell& c : table.cells) {
      if (c.grid_box) best = std::max(best, coverage(w.box, *c.grid_box));
    }
    total += best;
    ++out.words;
  }
  if (out.words > 0) out.mean = total / static_cast<double>(out.words);
  return out;
}

int count_objects(const TableAnnotation& table) {
  int n = 1 + table.n_rows + table.n_cols;
  if (column_header_rows(table) > 0) ++n;
  n += static_cast<int>(projected_row_header_rows(table).size());
  n += static_cast<int>(std::count_if(table.cells.begin(), table.cells.end(), [](const Cell& c) { return c.spanning(); }));
  return n;
}

std::vector<QcReason> qc_verdict(bool overlap_ok, double edit, double containment, int objects,
                                 const QcThresholds& th) {
  std::vector<QcReason> reasons;
  if (!overlap_ok) reasons.push_back(QcReason::Overlap);
  if (edit > th.max_edit_distance) reasons.push_back(QcReason::EditDistance);
  if (containment < th.min_word_containment) reasons.push_back(QcReason::WordContainment);
  if (objects > th.max_objects) reasons.push_back(QcReason::ObjectCount);
  return reasons;
}

QcReport run_qc(const TableAnnotation& table, const TokenSequence& chars, const TokenSequence& words,
                const QcThresholds& thresholds) {
  QcReport r;
  r.overlap_ok = check_overlap(table);
  r.mean_cell_edit_distance = cell_edit_distance(table, chars);
  const Containment c = word_containment(table, words);
  r.mean_word_containment = c.mean;
  r.no_words_in_table = c.words == 0;
  r.object_count = count_objects(table);
  r.reasons = qc_verdict(r.overlap_ok, r.mean_cell_edit_distance, r.mean_word_containment, r.object_count,
                         thresholds);
  return r;
}

}  // namespace tabcanon
