#include "tabcanon/metrics.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

constexpr std::size_t kExactSearchEntries = 25;
constexpr int kMaxHeuristicRounds = 64;

// Maximum-weight monotone matching between two index ranges (gaps are free).
IndexPairs best_monotone_matching(int n, int m, const std::function<double(int, int)>& weight, double* total) {
  std::vector<double> d(static_cast<std::size_t>((n + 1) * (m + 1)), 0.0);
  auto at = [&](int i, int k) -> double& { return d[static_cast<std::size_t>(i * (m + 1) + k)]; };
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= m; ++k) {
      at(i, k) = std::max({at(i - 1, k - 1) + weight(i - 1, k - 1), at(i - 1, k), at(i, k - 1)});
    }
  }
  if (total) *total = at(n, m);
  IndexPairs pairs;
  int i = n, k = m;
  while (i > 0 && k > 0) {
    if (at(i, k) == at(i - 1, k - 1) + weight(i - 1, k - 1) && weight(i - 1, k - 1) > 0.0) {
      pairs.emplace_back(i - 1, k - 1);
      --i;
      --k;
    } else if (at(i, k) == at(i - 1, k)) {
      --i;
    } else if (at(i, k) == at(i, k - 1)) {
      --k;
    } else {
      pairs.emplace_back(i - 1, k - 1);
      --i;
      --k;
    }
  }
  std::reverse(pairs.begin(), pairs.end());
  return pairs;
}

IndexPairs columns_given_rows(const SimilarityTable& f, const IndexPairs& rows, double* total) {
  return best_monotone_matching(
      f.a_cols(), f.b_cols(),
      [&](int j, int l) {
        double s = 0.0;
        for (const auto& [i, k] : rows) s += f(i, j, k, l);
        return s;
      },
      total);
}

IndexPairs rows_given_columns(const SimilarityTable& f, const IndexPairs& cols, double* total) {
  return best_monotone_matching(
      f.a_rows(), f.b_rows(),
      [&](int i, int k) {
        double s = 0.0;
        for (const auto& [j, l] : cols) s += f(i, j, k, l);
        return s;
      },
      total);
}

// Visits every monotone partial matching between [0, n) and [0, m).
void for_each_matching(int n, int m, IndexPairs& current, int i, int k, const std::function<void(const IndexPairs&)>& visit) {
  if (i == n || k == m) {
    visit(current);
    return;
  }
  for_each_matching(n, m, current, i + 1, k, visit);
  for (int kk = k; kk < m; ++kk) {
    current.emplace_back(i, kk);
    for_each_matching(n, m, current, i + 1, kk + 1, visit);
    current.pop_back();
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Substructure exact_search(const SimilarityTable& f) {
  Substructure best;
  best.total = -1.0;
  const bool enumerate_rows = binomial(f.a_rows() + f.b_rows(), f.a_rows()) <=
                              binomial(f.a_cols() + f.b_cols(), f.a_cols());
  IndexPairs current;
  if (enumerate_rows) {
    for_each_matching(f.a_rows(), f.b_rows(), current, 0, 0, [&](const IndexPairs& rows) {
      double total = 0.0;
      IndexPairs cols = columns_given_rows(f, rows, &total);
      if (total > best.total) best = {rows, std::move(cols), total};
    });
  } else {
    for_each_matching(f.a_cols(), f.b_cols(), current, 0, 0, [&](const IndexPairs& cols) {
      double total = 0.0;
      IndexPairs rows = rows_given_columns(f, cols, &total);
      if (total > best.total) best = {std::move(rows), cols, total};
    });
  }
  if (best.total < 0.0) best = {};
  return best;
}

Substructure heuristic_search(const SimilarityTable& f) {
  IndexPairs rows;
  for (int i = 0; i < std::min(f.a_rows(), f.b_rows()); ++i) rows.emplace_back(i, i);
  IndexPairs cols;
  for (int j = 0; j < std::min(f.a_cols(), f.b_cols()); ++j) cols.emplace_back(j, j);
  Substructure best{rows, cols, substructure_total(f, rows, cols)};
  for (int round = 0; round < kMaxHeuristicRounds; ++round) {
    double total = 0.0;
    cols = columns_given_rows(f, best.rows, &total);
    rows = rows_given_columns(f, cols, &total);
    if (!(total > best.total)) break;
    best = {rows, cols, total};
  }
  return best;
}

std::u32string cell_text(const Cell& c) { return text::decode_utf8(text::normalize_whitespace(c.text)); }

bool is_blank_cell(const Cell& c) { return text::is_blank(c.text); }

}  // namespace

CellMatrix cell_matrix(const TableAnnotation& table) {
  const Occupancy grid = build_grid(table);
  std::vector<std::u32string> texts;
  for (const Cell& c : table.cells) texts.push_back(cell_text(c));
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(table.n_rows * table.n_cols));
  for (int i = 0; i < table.n_rows; ++i) {
    for (int j = 0; j < table.n_cols; ++j) {
      const int k = grid.at(i, j);
      const Cell& c = table.cells[static_cast<std::size_t>(k)];
      MatrixEntry e;
      e.cell = k;
      e.text = texts[static_cast<std::size_t>(k)];
      e.span = {static_cast<double>(c.col_start - j), static_cast<double>(c.row_start - i),
                static_cast<double>(c.col_end - j + 1), static_cast<double>(c.row_end - i + 1)};
      e.box = c.grid_box ? c.grid_box : c.text_box;
      entries.push_back(std::move(e));
    }
  }
  return CellMatrix(table.n_rows, table.n_cols, std::move(entries));
}

double entry_similarity(const MatrixEntry& a, const MatrixEntry& b, GritsVariant variant) {
  switch (variant) {
    case GritsVariant::Topology:
      return iou(a.span, b.span);
    case GritsVariant::Content: {
      if (a.text.empty() && b.text.empty()) return 1.0;
      const double lcs = static_cast<double>(text::lcs_length(a.text, b.text));
      return 2.0 * lcs / static_cast<double>(a.text.size() + b.text.size());
    }
    case GritsVariant::Location:
      if (!a.box && !b.box) return 1.0;
      if (!a.box || !b.box) return 0.0;
      return iou(*a.box, *b.box);
  }
  return 0.0;
}

SimilarityTable::SimilarityTable(const CellMatrix& a, const CellMatrix& b, GritsVariant variant)
    : ra_(a.rows()), ca_(a.cols()), rb_(b.rows()), cb_(b.cols()) {
  values_.resize(a.size() * b.size());
  // Content and location depend only on the two cells, so cache per cell pair.
  std::map<std::pair<int, int>, double> cache;
  for (int i = 0; i < ra_; ++i) {
    for (int j = 0; j < ca_; ++j) {
      const MatrixEntry& x = a.at(i, j);
      for (int k = 0; k < rb_; ++k) {
        for (int l = 0; l < cb_; ++l) {
          const MatrixEntry& y = b.at(k, l);
          double v = 0.0;
          if (variant == GritsVariant::Topology) {
            v = entry_similarity(x, y, variant);
          } else {
            auto [it, fresh] = cache.try_emplace({x.cell, y.cell}, 0.0);
            if (fresh) it->second = entry_similarity(x, y, variant);
            v = it->second;
          }
          values_[static_cast<std::size_t>(((i * ca_ + j) * rb_ + k) * cb_ + l)] = v;
        }
      }
    }
  }
}

SimilarityTable::SimilarityTable(int ra, int ca, int rb, int cb, std::vector<double> values)
    : ra_(ra), ca_(ca), rb_(rb), cb_(cb), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(ra * ca * rb * cb)) {
    throw Error("similarity table has the wrong number of values");
  }
}

double substructure_total(const SimilarityTable& f, const IndexPairs& rows, const IndexPairs& columns) {
  double s = 0.0;
  for (const auto& [i, k] : rows) {
    for (const auto& [j, l] : columns) s += f(i, j, k, l);
  }
  return s;
}

Substructure grits_search(const SimilarityTable& f, SearchMode mode) {
  if (f.a_rows() == 0 || f.a_cols() == 0 || f.b_rows() == 0 || f.b_cols() == 0) return {};
  if (mode == SearchMode::Auto) {
    const std::size_t larger = std::max(static_cast<std::size_t>(f.a_rows() * f.a_cols()),
                                        static_cast<std::size_t>(f.b_rows() * f.b_cols()));
    mode = larger <= kExactSearchEntries ? SearchMode::Exact : SearchMode::Heuristic;
  }
  return mode == SearchMode::Exact ? exact_search(f) : heuristic_search(f);
}

double grits(const CellMatrix& a, const CellMatrix& b, GritsVariant variant, SearchMode mode) {
  const std::size_t denom = a.size() + b.size();
  if (denom == 0) return 1.0;
  const SimilarityTable f(a, b, variant);
  const Substructure best = grits_search(f, mode);
  return 2.0 * best.total / static_cast<double>(denom);
}

double grits(const TableAnnotation& a, const TableAnnotation& b, GritsVariant variant, SearchMode mode) {
  return grits(cell_matrix(a), cell_matrix(b), variant, mode);
}

std::vector<AdjacencyRelation> adjacency_relations(const TableAnnotation& table) {
  const Occupancy grid = build_grid(table);
  std::vector<AdjacencyRelation> out;
  for (std::size_t k = 0; k < table.cells.size(); ++k) {
    const Cell& c = table.cells[k];
    if (is_blank_cell(c)) continue;
    const std::string from = text::normalize_whitespace(c.text);
    std::vector<int> right, below;
    for (int i = c.row_start; i <= c.row_end; ++i) {
      int j = c.col_end + 1;
      while (j < table.n_cols) {
        const int o = grid.at(i, j);
        const Cell& d = table.cells[static_cast<std::size_t>(o)];
        if (!is_blank_cell(d)) {
          if (std::find(right.begin(), right.end(), o) == right.end()) right.push_back(o);
          break;
        }
        j = d.col_end + 1;
      }
    }
    for (int j = c.col_start; j <= c.col_end; ++j) {
      int i = c.row_end + 1;
      while (i < table.n_rows) {
        const int o = grid.at(i, j);
        const Cell& d = table.cells[static_cast<std::size_t>(o)];
        if (!is_blank_cell(d)) {
          if (std::find(below.begin(), below.end(), o) == below.end()) below.push_back(o);
          break;
        }
        i = d.row_end + 1;
      }
    }
    for (int o : right) {
      out.push_back({from, text::normalize_whitespace(table.cells[static_cast<std::size_t>(o)].text), Direction::Right});
    }
    for (int o : below) {
      out.push_back({from, text::normalize_whitespace(table.cells[static_cast<std::size_t>(o)].text), Direction::Below});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FScore adjacency_fscore(const TableAnnotation& truth, const TableAnnotation& predicted) {
  const auto gt = adjacency_relations(truth);
  const auto pr = adjacency_relations(predicted);
  FScore s;
  if (gt.empty() && pr.empty()) return {1.0, 1.0, 1.0};
  std::vector<AdjacencyRelation> common;
  std::set_intersection(gt.begin(), gt.end(), pr.begin(), pr.end(), std::back_inserter(common));
  const double inter = static_cast<double>(common.size());
  s.precision = pr.empty() ? 0.0 : inter / static_cast<double>(pr.size());
  s.recall = gt.empty() ? 0.0 : inter / static_cast<double>(gt.size());
  s.f = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

bool contents_match(const TableAnnotation& truth, const TableAnnotation& predicted) {
  if (truth.n_rows != predicted.n_rows || truth.n_cols != predicted.n_cols) return false;
  const Occupancy ga = build_grid(truth);
  const Occupancy gb = build_grid(predicted);
  for (int i = 0; i < truth.n_rows; ++i) {
    for (int j = 0; j < truth.n_cols; ++j) {
      const Cell& a = truth.cells[static_cast<std::size_t>(ga.at(i, j))];
      const Cell& b = predicted.cells[static_cast<std::size_t>(gb.at(i, j))];
      if (text::normalize_whitespace(a.text) != text::normalize_whitespace(b.text)) return false;
    }
  }
  return true;
}

double content_accuracy(std::span<const std::pair<TableAnnotation, TableAnnotation>> pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& [truth, predicted] : pairs) {
    if (contents_match(truth, predicted)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

}  // namespace tabcanon
