#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tabcanon/model.hpp"

namespace tabcanon {

/// One grid position of a table as seen by GriTS.
struct MatrixEntry {
  int cell = -1;              // index of the occupying cell
  std::u32string text;        // whitespace-normalized cell text
  BBox span;                  // cell span relative to this position, in grid units
  std::optional<BBox> box;    // absolute cell box (grid box, else text box)
};

class CellMatrix {
 public:
  CellMatrix() = default;
  CellMatrix(int rows, int cols, std::vector<MatrixEntry> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const MatrixEntry& at(int i, int j) const { return entries_.at(static_cast<std::size_t>(i * cols_ + j)); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<MatrixEntry> entries_;
};

CellMatrix cell_matrix(const TableAnnotation& table);

enum class GritsVariant { Topology, Content, Location };

/// Pointwise similarity in [0, 1] for one variant.
double entry_similarity(const MatrixEntry& a, const MatrixEntry& b, GritsVariant variant);

/// f(A[i][j], B[k][l]) for every pair of positions.
class SimilarityTable {
 public:
  SimilarityTable(const CellMatrix& a, const CellMatrix& b, GritsVariant variant);
  SimilarityTable(int ra, int ca, int rb, int cb, std::vector<double> values);

  int a_rows() const noexcept { return ra_; }
  int a_cols() const noexcept { return ca_; }
  int b_rows() const noexcept { return rb_; }
  int b_cols() const noexcept { return cb_; }
  double operator()(int i, int j, int k, int l) const noexcept {
    return values_[static_cast<std::size_t>(((i * ca_ + j) * rb_ + k) * cb_ + l)];
  }

 private:
  int ra_ = 0, ca_ = 0, rb_ = 0, cb_ = 0;
  std::vector<double> values_;
};

using IndexPairs = std::vector<std::pair<int, int>>;

struct Substructure {
  IndexPairs rows;     // (row of A, row of B), increasing in both
  IndexPairs columns;  // (column of A, column of B), increasing in both
  double total = 0.0;  // sum of f over the selected positions
};

enum class SearchMode {
  Auto,       // exact when the larger matrix has at most 25 entries, else heuristic
  Exact,      // every monotone matching of one axis, optimal DP on the other
  Heuristic,  // alternate optimal DP on columns and rows until no improvement
};

/// Most similar order-preserving substructures of A and B.
Substructure grits_search(const SimilarityTable& f, SearchMode mode = SearchMode::Auto);

/// Sum of f over a given pair of selections.
double substructure_total(const SimilarityTable& f, const IndexPairs& rows, const IndexPairs& columns);

/// 2 * best / (|A| + |B|) with |.| the number of grid positions; 1 for two empty tables.
double grits(const CellMatrix& a, const CellMatrix& b, GritsVariant variant, SearchMode mode = SearchMode::Auto);
double grits(const TableAnnotation& a, const TableAnnotation& b, GritsVariant variant,
             SearchMode mode = SearchMode::Auto);

struct FScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

enum class Direction { Right, Below };

struct AdjacencyRelation {
  std::string from;
  std::string to;
  Direction direction;
  friend auto operator<=>(const AdjacencyRelation&, const AdjacencyRelation&) = default;
};

/// (cell text, nearest non-blank neighbour text, direction) for every
/// non-blank cell, scanning across blank cells. Sorted; may hold duplicates.
std::vector<AdjacencyRelation> adjacency_relations(const TableAnnotation& table);

/// Multiset F-score of the relations; `truth` supplies recall's denominator.
FScore adjacency_fscore(const TableAnnotation& truth, const TableAnnotation& predicted);

/// Same grid shape and equal whitespace-normalized text at every position.
bool contents_match(const TableAnnotation& truth, const TableAnnotation& predicted);

/// Fraction of pairs whose contents match exactly; 0 for an empty input.
double content_accuracy(std::span<const std::pair<TableAnnotation, TableAnnotation>> pairs);

}  // namespace tabcanon
