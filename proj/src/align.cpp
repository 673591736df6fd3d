#include "tabcanon/align.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

constexpr long long kNegInf = std::numeric_limits<long long>::min() / 4;

enum Move : std::uint8_t { kNone = 0, kDiag = 1, kUp = 2, kLeft = 3 };

struct Window {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

std::vector<Window> band_windows(std::size_t n, std::size_t m, std::size_t band) {
  std::vector<Window> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (band == 0 || n == 0) {
      w[i] = {0, m};
      continue;
    }
    const std::size_t center = (i * m + n / 2) / n;
    w[i].lo = center > band ? center - band : 0;
    w[i].hi = std::min(m, center + band);
    if (i > 0 && w[i].lo > w[i - 1].hi) w[i].lo = w[i - 1].hi;
  }
  w[0].lo = 0;
  w[n].hi = m;
  return w;
}

}  // namespace

Alignment needleman_wunsch(std::u32string_view a, std::u32string_view b, const AlignScores& scores,
                           std::size_t band) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const auto windows = band_windows(n, m, band);

  std::vector<std::vector<std::uint8_t>> trace(n + 1);
  std::vector<long long> prev(m + 1, kNegInf);
  std::vector<long long> cur(m + 1, kNegInf);

  for (std::size_t i = 0; i <= n; ++i) {
    const Window win = windows[i];
    trace[i].assign(win.hi - win.lo + 1, kNone);
    std::fill(cur.begin(), cur.end(), kNegInf);
    for (std::size_t j = win.lo; j <= win.hi; ++j) {
      long long best = kNegInf;
      std::uint8_t move = kNone;
      if (i == 0 && j == 0) {
        best = 0;
      }
      if (i > 0 && j > 0 && prev[j - 1] > kNegInf) {
        const long long s = prev[j - 1] + (a[i - 1] == b[j - 1] ? scores.match : scores.mismatch);
        if (s > best) {
          best = s;
          move = kDiag;
        }
      }
      if (i > 0 && prev[j] > kNegInf) {
        const long long s = prev[j] + scores.gap;
        if (s > best) {
          best = s;
          move = kUp;
        }
      }
      if (j > 0 && cur[j - 1] > kNegInf) {
        const long long s = cur[j - 1] + scores.gap;
        if (s > best) {
          best = s;
          move = kLeft;
        }
      }
      cur[j] = best;
      trace[i][j - win.lo] = move;
    }
    std::swap(prev, cur);
  }

  Alignment out;
  out.score = prev[m];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint8_t move = trace[i][j - windows[i].lo];
    if (move == kDiag) {
      out.pairs.emplace_back(i - 1, j - 1);
      --i;
      --j;
    } else if (move == kUp) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

TextAlignment align_table_text(const TableAnnotation& table, const TokenSequence& tokens,
                               const AlignOptions& options) {
  TextAlignment out;
  out.table = table;
  out.cells.assign(table.cells.size(), {});

  std::vector<std::size_t> order(table.cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const Cell& a = table.cells[x];
    const Cell& b = table.cells[y];
    return std::tie(a.row_start, a.col_start) < std::tie(b.row_start, b.col_start);
  });

  std::u32string markup;
  std::vector<std::size_t> markup_cell;
  for (std::size_t k : order) {
    const auto chars = text::non_whitespace(table.cells[k].text);
    out.cells[k].characters = chars.size();
    markup += chars;
    markup_cell.insert(markup_cell.end(), chars.size(), k);
  }

  std::u32string page;
  std::vector<std::size_t> page_token;
  for (std::size_t t = 0; t < tokens.tokens.size(); ++t) {
    const auto chars = text::non_whitespace(tokens.tokens[t].text);
    page += chars;
    page_token.insert(page_token.end(), chars.size(), t);
  }
  if (page.empty() && !markup.empty()) {
    throw EmptyTokenStreamError("token stream has no characters but the table has text");
  }

  const Alignment al = needleman_wunsch(markup, page, options.scores, options.band);
  out.score = al.score;

  std::vector<std::optional<BBox>> boxes(table.cells.size());
  std::vector<bool> token_used(tokens.tokens.size(), false);
  for (const auto& [mi, pi] : al.pairs) {
    const std::size_t k = markup_cell[mi];
    const std::size_t t = page_token[pi];
    const BBox& box = tokens.tokens[t].box;
    boxes[k] = boxes[k] ? hull(*boxes[k], box) : box;
    token_used[t] = true;
    ++out.cells[k].aligned;
    if (markup[mi] == page[pi]) ++out.cells[k].matched;
  }

  std::optional<BBox> table_box;
  for (std::size_t k = 0; k < table.cells.size(); ++k) {
    Cell& cell = out.table.cells[k];
    CellAlignment& info = out.cells[k];
    info.match_fraction =
        info.characters == 0 ? 1.0 : static_cast<double>(info.matched) / static_cast<double>(info.characters);
    cell.text_box = boxes[k];
    if (boxes[k]) {
      table_box = table_box ? hull(*table_box, *boxes[k]) : *boxes[k];
    } else if (info.characters > 0) {
      out.unboxed_cells.push_back(k);
    }
  }

  if (table_box) {
    for (std::size_t t = 0; t < tokens.tokens.size(); ++t) {
      if (!token_used[t] && !text::is_blank(tokens.tokens[t].text) &&
          overlap_area(tokens.tokens[t].box, *table_box) > 0.0) {
        out.unmatched_tokens.push_back(t);
      }
    }
  }
  return out;
}

}  // namespace tabcanon
