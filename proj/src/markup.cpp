#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tabcanon/ingest.hpp"
#include "tabcanon/text.hpp"

namespace tabcanon {

namespace {

struct Tag {
  std::string name;  // lower-case
  bool closing = false;
  bool self_closing = false;
  std::map<std::string, std::string> attrs;
};

struct PendingCell {
  std::string raw_text;
  int rowspan = 1;
  int colspan = 1;
  bool header = false;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::map<std::string, char32_t>& named_entities() {
  static const std::map<std::string, char32_t> table{
      {"amp", U'&'},     {"lt", U'<'},      {"gt", U'>'},       {"quot", U'"'},
      {"apos", U'\''},   {"nbsp", 0xA0},    {"ndash", 0x2013},  {"mdash", 0x2014},
      {"minus", 0x2212}, {"plusmn", 0xB1},  {"times", 0xD7},    {"deg", 0xB0},
      {"middot", 0xB7},  {"le", 0x2264},    {"ge", 0x2265},     {"thinsp", 0x2009},
      {"hellip", 0x2026}, {"dagger", 0x2020}, {"Dagger", 0x2021}, {"micro", 0xB5},
  };
  return table;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view body = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (!body.empty() && body[0] == '#') {
      unsigned long value = 0;
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const std::string_view digits = body.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() && value <= 0x10FFFF) {
        cp = static_cast<char32_t>(value);
      }
    } else if (auto it = named_entities().find(std::string(body)); it != named_entities().end()) {
      cp = it->second;
    }
    if (!cp) {
      out.push_back(s[i++]);
      continue;
    }
    out += text::encode_utf8(std::u32string(1, *cp));
    i = semi + 1;
  }
  return out;
}

Tag parse_tag(std::string_view inner) {
  Tag tag;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
  };
  skip_ws();
  if (i < inner.size() && inner[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  while (i < inner.size() && !std::isspace(static_cast<unsigned char>(inner[i])) && inner[i] != '/' &&
         inner[i] != '>') {
    ++i;
  }
  tag.name = lower(inner.substr(name_start, i - name_start));
  while (i < inner.size()) {
    skip_ws();
    if (i >= inner.size()) break;
    if (inner[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    const std::size_t key_start = i;
    while (i < inner.size() && inner[i] != '=' && !std::isspace(static_cast<unsigned char>(inner[i])) &&
           inner[i] != '/') {
      ++i;
    }
    std::string key = lower(inner.substr(key_start, i - key_start));
    skip_ws();
    std::string value;
    if (i < inner.size() && inner[i] == '=') {
      ++i;
      skip_ws();
      if (i < inner.size() && (inner[i] == '"' || inner[i] == '\'')) {
        const char quote = inner[i++];
        const auto end = inner.find(quote, i);
        if (end == std::string_view::npos) throw MarkupError("unterminated attribute value in <" + tag.name + ">");
        value = std::string(inner.substr(i, end - i));
        i = end + 1;
      } else {
        const std::size_t v_start = i;
        while (i < inner.size() && !std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
        value = std::string(inner.substr(v_start, i - v_start));
      }
    }
    if (!key.empty()) tag.attrs[key] = decode_entities(value);
  }
  return tag;
}

int span_attr(const Tag& tag, const std::string& key) {
  auto it = tag.attrs.find(key);
  if (it == tag.attrs.end()) return 1;
  std::string v = it->second;
  v.erase(std::remove_if(v.begin(), v.end(), [](unsigned char c) { return std::isspace(c); }), v.end());
  int value = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc() || ptr != v.data() + v.size() || value < 0) {
    throw MarkupError("invalid " + key + " value '" + it->second + "'");
  }
  return value;  // 0 handled by the caller
}

bool is_section(const std::string& name) { return name == "thead" || name == "tbody" || name == "tfoot"; }
bool is_line_break(const std::string& name) {
  return name == "br" || name == "p" || name == "div" || name == "li";
}

class MarkupReader {
 public:
  explicit MarkupReader(std::string_view src) : src_(src) {}

  std::vector<std::vector<PendingCell>> read() {
    std::size_t i = 0;
    while (i < src_.size()) {
      if (src_[i] != '<') {
        const auto next = src_.find('<', i);
        text(src_.substr(i, next == std::string_view::npos ? std::string_view::npos : next - i));
        if (next == std::string_view::npos) break;
        i = next;
        continue;
      }
      if (src_.substr(i, 4) == "<!--") {
        const auto end = src_.find("-->", i + 4);
        if (end == std::string_view::npos) throw MarkupError("unterminated comment");
        i = end + 3;
        continue;
      }
      const auto end = src_.find('>', i);
      if (end == std::string_view::npos) throw MarkupError("unterminated tag");
      const std::string_view inner = src_.substr(i + 1, end - i - 1);
      i = end + 1;
      if (!inner.empty() && (inner[0] == '!' || inner[0] == '?')) continue;
      handle(parse_tag(inner));
    }
    finish();
    return std::move(rows_);
  }

 private:
  void text(std::string_view chunk) {
    if (in_skipped_) return;
    if (cell_) {
      cell_->raw_text += decode_entities(chunk);
      return;
    }
    if (!text::is_blank(decode_entities(chunk))) {
      throw MarkupError("text outside of any table cell");
    }
  }

  void handle(const Tag& tag) {
    const std::string& n = tag.name;
    if (in_skipped_) {
      if (tag.closing && n == "caption") in_skipped_ = false;
      return;
    }
    if (n == "table") {
      if (tag.closing) {
        if (!table_open_) throw MarkupError("</table> without <table>");
        close_row();
        table_open_ = false;
        table_closed_ = true;
        return;
      }
      if (cell_) throw MarkupError("nested tables are not supported");
      if (table_open_ || table_closed_ || !rows_.empty() || row_open_) {
        throw MarkupError("markup must contain exactly one table");
      }
      table_open_ = true;
      return;
    }
    if (table_closed_) throw MarkupError("content after </table>");
    if (n == "td" || n == "th") {
      if (tag.closing) {
        if (!cell_) throw MarkupError("</" + n + "> without an open cell");
        close_cell();
        return;
      }
      if (!row_open_) open_row();
      close_cell();
      PendingCell c;
      c.rowspan = span_attr(tag, "rowspan");
      c.colspan = std::max(1, span_attr(tag, "colspan"));
      c.header = n == "th" || in_thead_;
      cell_ = std::move(c);
      return;
    }
    if (n == "tr") {
      if (tag.closing) {
        if (!row_open_) throw MarkupError("</tr> without <tr>");
        close_row();
      } else {
        close_row();
        open_row();
      }
      return;
    }
    if (cell_) {
      if (is_line_break(n)) cell_->raw_text += ' ';
      return;  // inline markup contributes text only
    }
    if (is_section(n)) {
      close_row();
      in_thead_ = !tag.closing && n == "thead";
      return;
    }
    if (n == "col" || n == "colgroup") return;
    if (n == "caption" && !tag.closing) {
      in_skipped_ = true;
      return;
    }
    throw MarkupError("unexpected <" + std::string(tag.closing ? "/" : "") + n + "> outside a cell");
  }

  void open_row() {
    rows_.emplace_back();
    row_open_ = true;
  }

  void close_cell() {
    if (!cell_) return;
    rows_.back().push_back(std::move(*cell_));
    cell_.reset();
  }

  void close_row() {
    close_cell();
    row_open_ = false;
  }

  void finish() {
    if (table_open_) throw MarkupError("unclosed <table>");
    if (!table_closed_ && rows_.empty()) throw MarkupError("no table found");
    if (in_skipped_) throw MarkupError("unclosed <caption>");
    close_row();
  }

  std::string_view src_;
  std::vector<std::vector<PendingCell>> rows_;
  std::optional<PendingCell> cell_;
  bool row_open_ = false;
  bool table_open_ = false;
  bool table_closed_ = false;
  bool in_thead_ = false;
  bool in_skipped_ = false;
};

}  // namespace

TableAnnotation parse_markup(std::string_view markup) {
  const auto rows = MarkupReader(markup).read();
  const int n_rows = static_cast<int>(rows.size());

  TableAnnotation table;
  table.n_rows = n_rows;
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n_rows));
  auto occupied = [&](int r, int c) {
    const auto& row = used[static_cast<std::size_t>(r)];
    return c < static_cast<int>(row.size()) && row[static_cast<std::size_t>(c)];
  };
  auto mark = [&](int r, int c) {
    auto& row = used[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) <= c) row.resize(static_cast<std::size_t>(c) + 1, false);
    row[static_cast<std::size_t>(c)] = true;
  };

  for (int r = 0; r < n_rows; ++r) {
    int col = 0;
    for (const PendingCell& pc : rows[static_cast<std::size_t>(r)]) {
      while (occupied(r, col)) ++col;
      const int rowspan = pc.rowspan == 0 ? n_rows - r : pc.rowspan;
      if (r + rowspan > n_rows) {
        std::ostringstream os;
        os << "cell at row " << r << " has rowspan " << rowspan << " past the last row";
        throw RaggedGridError(os.str());
      }
      Cell cell;
      cell.row_start = r;
      cell.row_end = r + rowspan - 1;
      cell.col_start = col;
      cell.col_end = col + pc.colspan - 1;
      cell.text = text::normalize_whitespace(pc.raw_text);
      cell.is_column_header = pc.header;
      for (int rr = cell.row_start; rr <= cell.row_end; ++rr) {
        for (int cc = cell.col_start; cc <= cell.col_end; ++cc) {
          if (occupied(rr, cc)) {
            std::ostringstream os;
            os << "cells overlap at (" << rr << ',' << cc << ')';
            throw RaggedGridError(os.str());
          }
          mark(rr, cc);
        }
      }
      table.cells.push_back(std::move(cell));
      col += pc.colspan;
    }
  }

  int n_cols = 0;
  for (const auto& row : used) n_cols = std::max(n_cols, static_cast<int>(row.size()));
  for (int r = 0; r < n_rows; ++r) {
    const auto& row = used[static_cast<std::size_t>(r)];
    const auto filled = std::count(row.begin(), row.end(), true);
    if (filled != n_cols) {
      std::ostringstream os;
      os << "row " << r << " covers " << filled << " of " << n_cols << " columns";
      throw RaggedGridError(os.str());
    }
  }
  table.n_cols = n_cols;
  sort_cells(table);
  (void)build_grid(table);
  return table;
}

}  // namespace tabcanon
