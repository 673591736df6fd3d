#pragma once

#include <string>
#include <vector>

#include "tabcanon/ingest.hpp"
#include "tabcanon/model.hpp"

namespace tabcanon {

struct QcThresholds {
  double max_edit_distance = 0.05;
  double min_word_containment = 0.9;
  int max_objects = 100;
};

enum class QcReason { Overlap, EditDistance, WordContainment, ObjectCount };

std::string_view reason_name(QcReason r) noexcept;

struct QcReport {
  bool overlap_ok = true;
  double mean_cell_edit_distance = 0.0;
  double mean_word_containment = 1.0;
  bool no_words_in_table = false;  // containment passed vacuously
  int object_count = 0;
  std::vector<QcReason> reasons;   // empty means accepted

  bool accepted() const noexcept { return reasons.empty(); }
};

/// True when no two rows and no two columns overlap with positive area.
/// Throws MissingBoxesError without completed row/column boxes.
bool check_overlap(const TableAnnotation& table);

/// Mean over all cells of the normalized edit distance between the cell's
/// non-whitespace markup text and the non-whitespace text of the tokens
/// falling in its grid box.
double cell_edit_distance(const TableAnnotation& table, const TokenSequence& tokens);

struct Containment {
  double mean = 1.0;
  std::size_t words = 0;  // words intersecting the table box
};

/// Mean over words intersecting the table box of the largest fraction of the
/// word covered by a single grid cell.
Containment word_containment(const TableAnnotation& table, const TokenSequence& words);

/// 1 (table) + rows + columns + column header (if any) + PRH rows + spanning cells.
int count_objects(const TableAnnotation& table);

/// Verdict from the four measurements.
std::vector<QcReason> qc_verdict(bool overlap_ok, double edit, double containment, int objects,
                                 const QcThresholds& thresholds);

/// Runs all four filters. `chars` feeds the edit-distance filter and `words`
/// the containment filter; they may be the same sequence.
QcReport run_qc(const TableAnnotation& table, const TokenSequence& chars, const TokenSequence& words,
                const QcThresholds& thresholds = {});

}  // namespace tabcanon
