#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "tabcanon/ingest.hpp"
#include "tabcanon/model.hpp"

namespace tabcanon {

/// Scores for global alignment; expects match > 0 >= mismatch, gap.
struct AlignScores {
  int match = 2;
  int mismatch = -1;
  int gap = -1;
};

struct Alignment {
  /// Aligned (index in a, index in b) pairs, both strictly increasing.
  /// Substitutions are included; gaps are not.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  long long score = 0;
};

/// Needleman-Wunsch global alignment. Traceback prefers diagonal, then a
/// gap in `b` (consuming `a`), then a gap in `a`. A non-zero `band` limits the
/// search to cells within `band` columns of the scaled diagonal.
Alignment needleman_wunsch(std::u32string_view a, std::u32string_view b, const AlignScores& scores = {},
                           std::size_t band = 0);

struct AlignOptions {
  AlignScores scores;
  std::size_t band = 0;
};

struct CellAlignment {
  std::size_t characters = 0;  // non-whitespace characters in the markup text
  std::size_t aligned = 0;     // characters paired with a page character
  std::size_t matched = 0;     // characters paired with an identical page character
  double match_fraction = 1.0; // matched / characters (1 for blank cells)
};

struct TextAlignment {
  TableAnnotation table;                 // text_box filled where possible
  std::vector<CellAlignment> cells;      // parallel to table.cells
  std::vector<std::size_t> unboxed_cells;  // non-blank cells that received no characters
  std::vector<std::size_t> unmatched_tokens;  // page tokens inside the table box left unassigned
  long long score = 0;
};

/// Aligns the table's non-whitespace markup text, cells in reading order,
/// against the page characters. Word tokens are exploded into characters
/// that inherit the word box. Throws EmptyTokenStreamError when the page has
/// no characters but the markup has text.
TextAlignment align_table_text(const TableAnnotation& table, const TokenSequence& tokens,
                               const AlignOptions& options = {});

}  // namespace tabcanon
