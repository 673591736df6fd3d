#include "tabcanon/synth.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

constexpr std::array<const char*, 24> kWords = {
    "Total", "Revenue", "Cost", "Year", "Region", "North", "South", "Rate", "Mean", "Group", "Dose", "Age",
    "Count", "Sales", "Net", "Q1", "Q2", "Level", "Type", "Score", "Value", "Site", "Male", "Female"};

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string random_text(std::mt19937_64& rng) {
  std::string s;
  const int n = uniform(rng, 1, 3);
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    if (chance(rng, 0.4)) {
      s += std::to_string(uniform(rng, 0, 9999));
      if (chance(rng, 0.3)) s += "." + std::to_string(uniform(rng, 0, 99));
    } else {
      s += kWords[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(kWords.size()) - 1))];
    }
  }
  return s;
}

}  // namespace

Rendered render_table(const TableAnnotation& logical, const RenderOptions& o) {
  (void)build_grid(logical);
  Rendered out;
  out.table = logical;
  out.table.rows.reset();
  out.table.columns.reset();
  out.table.table_box.reset();
  sort_cells(out.table);
  out.chars.granularity = Granularity::Character;
  out.words.granularity = Granularity::Word;

  std::vector<std::u32string> texts;
  for (const Cell& c : out.table.cells) texts.push_back(text::decode_utf8(text::normalize_whitespace(c.text)));

  std::vector<double> width(static_cast<std::size_t>(logical.n_cols), o.min_column_width);
  auto needed = [&](std::size_t k) { return static_cast<double>(texts[k].size()) * o.char_width + 2.0 * o.padding; };
  for (std::size_t k = 0; k < out.table.cells.size(); ++k) {
    const Cell& c = out.table.cells[k];
    if (c.col_span() == 1) width[static_cast<std::size_t>(c.col_start)] = std::max(width[static_cast<std::size_t>(c.col_start)], needed(k));
  }
  std::vector<std::size_t> spanning;
  for (std::size_t k = 0; k < out.table.cells.size(); ++k) {
    if (out.table.cells[k].col_span() > 1) spanning.push_back(k);
  }
  std::stable_sort(spanning.begin(), spanning.end(), [&](std::size_t a, std::size_t b) {
    return out.table.cells[a].col_end < out.table.cells[b].col_end;
  });
  for (std::size_t k : spanning) {
    const Cell& c = out.table.cells[k];
    const double have = std::accumulate(width.begin() + c.col_start, width.begin() + c.col_end + 1, 0.0);
    if (needed(k) > have) width[static_cast<std::size_t>(c.col_end)] += needed(k) - have;
  }
  std::vector<double> col_x(static_cast<std::size_t>(logical.n_cols) + 1, o.x0);
  for (std::size_t j = 0; j < width.size(); ++j) col_x[j + 1] = col_x[j] + width[j];
  auto row_y = [&](int r) { return o.y0 + r * o.row_height; };

  for (std::size_t k = 0; k < out.table.cells.size(); ++k) {
    Cell& c = out.table.cells[k];
    c.text_box.reset();
    c.grid_box.reset();
    const auto& u = texts[k];
    if (u.empty()) continue;
    const double span_w = col_x[static_cast<std::size_t>(c.col_end) + 1] - col_x[static_cast<std::size_t>(c.col_start)];
    const double text_w = static_cast<double>(u.size()) * o.char_width;
    double x = c.col_span() > 1 ? col_x[static_cast<std::size_t>(c.col_start)] + (span_w - text_w) / 2.0
                                : col_x[static_cast<std::size_t>(c.col_start)] + o.padding;
    const double top = (row_y(c.row_start) + row_y(c.row_end + 1) - o.char_height) / 2.0;
    std::optional<BBox> word;
    std::string word_text;
    auto flush = [&] {
      if (word) out.words.tokens.push_back({word_text, *word});
      word.reset();
      word_text.clear();
    };
    for (char32_t ch : u) {
      const BBox b{x, top, x + o.char_width, top + o.char_height};
      x += o.char_width;
      if (text::is_space(ch)) {
        flush();
        continue;
      }
      const std::string s = text::encode_utf8(std::u32string(1, ch));
      out.chars.tokens.push_back({s, b});
      word = word ? hull(*word, b) : b;
      word_text += s;
      c.text_box = c.text_box ? hull(*c.text_box, b) : b;
    }
    flush();
  }
  return out;
}

std::string table_to_markup(const TableAnnotation& table) {
  TableAnnotation t = table;
  sort_cells(t);
  const int h = column_header_rows(t);
  auto escape = [](const std::string& s) {
    std::string out;
    for (char ch : s) {
      switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += ch;
      }
    }
    return out;
  };
  std::string out = "<table>\n";
  std::size_t k = 0;
  for (int r = 0; r < t.n_rows; ++r) {
    if (r == 0 && h > 0) out += "<thead>\n";
    if (r == h) out += "<tbody>\n";
    out += "<tr>";
    for (; k < t.cells.size() && t.cells[k].row_start == r; ++k) {
      const Cell& c = t.cells[k];
      const char* tag = c.is_column_header ? "th" : "td";
      out += std::string("<") + tag;
      if (c.row_span() > 1) out += " rowspan=\"" + std::to_string(c.row_span()) + "\"";
      if (c.col_span() > 1) out += " colspan=\"" + std::to_string(c.col_span()) + "\"";
      out += ">" + escape(c.text) + "</" + tag + ">";
    }
    out += "</tr>\n";
    if (r + 1 == h) out += "</thead>\n";
  }
  if (h < t.n_rows) out += "</tbody>\n";
  out += "</table>\n";
  return out;
}

TableAnnotation random_table(std::mt19937_64& rng, const RandomTableOptions& o) {
  TableAnnotation t;
  t.n_rows = uniform(rng, o.min_rows, o.max_rows);
  t.n_cols = uniform(rng, o.min_cols, o.max_cols);
  const int h = t.n_rows > 1 && chance(rng, o.header_prob) ? uniform(rng, 1, std::min(o.max_header_rows, t.n_rows - 1)) : 0;
  const bool flagged = chance(rng, o.flag_header_prob);
  const bool stub_blank = chance(rng, o.stub_blank_prob);

  std::vector<bool> prh(static_cast<std::size_t>(t.n_rows), false);
  for (int r = h; r < t.n_rows && t.n_cols > 1; ++r) prh[static_cast<std::size_t>(r)] = chance(rng, o.prh_prob);

  std::vector<int> owner(static_cast<std::size_t>(t.n_rows * t.n_cols), -1);
  auto owner_at = [&](int r, int c) { return owner[static_cast<std::size_t>(r * t.n_cols + c)]; };
  auto at = [&](int r, int c) { return owner_at(r, c) >= 0; };
  auto add = [&](Cell c) {
    for (int r = c.row_start; r <= c.row_end; ++r) {
      for (int j = c.col_start; j <= c.col_end; ++j) {
        owner[static_cast<std::size_t>(r * t.n_cols + j)] = static_cast<int>(t.cells.size());
      }
    }
    t.cells.push_back(std::move(c));
  };

  for (int r = 0; r < t.n_rows; ++r) {
    if (prh[static_cast<std::size_t>(r)]) {
      Cell label;
      label.row_start = label.row_end = r;
      label.text = random_text(rng);
      label.is_projected_row_header = flagged;
      if (chance(rng, o.prh_split_prob)) {
        label.is_projected_row_header = false;
        add(label);
        for (int j = 1; j < t.n_cols; ++j) {
          Cell b;
          b.row_start = b.row_end = r;
          b.col_start = b.col_end = j;
          add(b);
        }
      } else {
        label.col_end = t.n_cols - 1;
        add(label);
      }
      continue;
    }
    for (int c = 0; c < t.n_cols; ++c) {
      if (at(r, c)) continue;
      int rs = 1, cs = 1;
      if (chance(rng, o.span_prob)) {
        rs = uniform(rng, 1, o.max_span);
        cs = uniform(rng, 1, o.max_span);
      }
      const int row_limit = r < h ? h : t.n_rows;
      int r_end = r;
      while (r_end + 1 < std::min(r + rs, row_limit) && !prh[static_cast<std::size_t>(r_end + 1)] && !at(r_end + 1, c)) ++r_end;
      int c_end = c;
      auto column_free = [&](int j) {
        // column spans nest inside the cell above so any inferred header is a tree
        if (r > 0 && owner_at(r - 1, j) != owner_at(r - 1, c)) return false;
        for (int i = r; i <= r_end; ++i) {
          if (at(i, j)) return false;
        }
        return true;
      };
      // header cells reaching the last header row are single-column leaves
      const bool leaf = r < h && r_end == h - 1;
      while (!leaf && c_end + 1 < std::min(c + cs, t.n_cols) && column_free(c_end + 1)) ++c_end;
      Cell cell;
      cell.row_start = r;
      cell.row_end = r_end;
      cell.col_start = c;
      cell.col_end = c_end;
      bool blank = chance(rng, o.blank_prob);
      if (r < h && c == 0) {
        blank = stub_blank;
      } else if (leaf || (h == 0 && r == 0 && c == 0)) {
        blank = false;
      }
      if (!blank) cell.text = random_text(rng);
      cell.is_column_header = flagged && r < h;
      add(std::move(cell));
    }
  }
  sort_cells(t);
  return t;
}

bool oversegment_prh(TableAnnotation& table, int row) {
  if (table.n_cols < 2) return false;
  auto it = std::find_if(table.cells.begin(), table.cells.end(), [&](const Cell& c) {
    return c.row_start == row && c.row_end == row && c.col_start == 0 && c.col_end == table.n_cols - 1;
  });
  if (it == table.cells.end() || it->blank()) return false;
  it->col_end = 0;
  it->is_projected_row_header = false;
  it->grid_box.reset();
  for (int j = 1; j < table.n_cols; ++j) {
    Cell b;
    b.row_start = b.row_end = row;
    b.col_start = b.col_end = j;
    table.cells.push_back(b);
  }
  table.rows.reset();
  table.columns.reset();
  sort_cells(table);
  return true;
}

TokenSequence add_noise(const TokenSequence& chars, double rate, std::mt19937_64& rng) {
  const std::size_t n = chars.tokens.size();
  const auto count = static_cast<std::size_t>(rate * static_cast<double>(n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<bool> noisy(n, false);
  for (std::size_t i = 0; i < count; ++i) noisy[idx[i]] = true;

  TokenSequence out;
  out.granularity = chars.granularity;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = chars.tokens[i];
    out.tokens.push_back(t);
    if (!noisy[i]) continue;
    const double w = t.box.width() / 2.0;
    out.tokens.push_back({chance(rng, 0.5) ? "-" : " ", {t.box.x_max, t.box.y_min, t.box.x_max + w, t.box.y_max}});
  }
  return out;
}

}  // namespace tabcanon
