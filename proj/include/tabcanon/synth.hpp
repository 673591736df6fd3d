#pragma once

#include <random>
#include <string>

#include "tabcanon/ingest.hpp"
#include "tabcanon/model.hpp"

namespace tabcanon {

/// Fixed-pitch page layout. Every character is char_width x char_height.
struct RenderOptions {
  double x0 = 36.0;
  double y0 = 72.0;
  double char_width = 5.0;
  double char_height = 8.0;
  double row_height = 16.0;
  double padding = 4.0;
  double min_column_width = 20.0;
};

struct Rendered {
  TableAnnotation table;  // input with text boxes set, derived geometry cleared
  TokenSequence chars;    // one token per non-whitespace character
  TokenSequence words;
};

/// Lays the table out as a ruled grid: single-column text left-aligned,
/// spanning text centered, all text vertically centered in its rows.
/// Tokens come in reading order (cells by row, then column).
Rendered render_table(const TableAnnotation& logical, const RenderOptions& options = {});

/// HTML for the table: column-header rows in <thead>, spans as rowspan/colspan.
std::string table_to_markup(const TableAnnotation& table);

struct RandomTableOptions {
  int min_rows = 3;
  int max_rows = 9;
  int min_cols = 2;
  int max_cols = 6;
  double header_prob = 0.8;
  int max_header_rows = 3;
  double flag_header_prob = 0.6;  // header flags present in the annotation
  double stub_blank_prob = 0.5;   // top-left header cell left blank
  double span_prob = 0.2;
  int max_span = 3;
  double blank_prob = 0.1;
  double prh_prob = 0.12;
  double prh_split_prob = 0.5;    // PRH emitted as a label plus blank cells
};

/// A random tileable table mixing headers, spans, blanks and PRH rows.
TableAnnotation random_table(std::mt19937_64& rng, const RandomTableOptions& options = {});

/// Replaces the single cell of a PRH row by its label in the first column
/// followed by blank 1x1 cells. Returns false when `row` is not such a row.
bool oversegment_prh(TableAnnotation& table, int row);

/// Hyphenation and whitespace noise: after each character token, with
/// probability `rate`, inserts a hyphen or a space token beside it.
TokenSequence add_noise(const TokenSequence& chars, double rate, std::mt19937_64& rng);

}  // namespace tabcanon
