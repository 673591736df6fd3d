#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabcanon/ingest.hpp"
#include "tabcanon/text.hpp"

namespace tabcanon {

using nlohmann::json;

namespace {

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string at_key(const std::string& path, const std::string& key) { return path + "." + key; }

const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(at_key(path, key), "missing required field");
  return *it;
}

long long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<long long>();
}

int as_count(const json& v, const std::string& path) {
  const long long x = as_int(v, path);
  if (x < 0 || x > 1'000'000) throw SchemaError(path, "expected a non-negative count");
  return static_cast<int>(x);
}

bool as_bool(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw SchemaError(at_key(path, key), "expected a boolean");
  return it->get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

BBox as_box(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) throw SchemaError(path, "expected [x_min, y_min, x_max, y_max]");
  BBox b{as_number(v[0], at_index(path, 0)), as_number(v[1], at_index(path, 1)),
         as_number(v[2], at_index(path, 2)), as_number(v[3], at_index(path, 3))};
  if (b.x_min > b.x_max) throw SchemaError(path, "x_min > x_max");
  if (b.y_min > b.y_max) throw SchemaError(path, "y_min > y_max");
  return b;
}

std::optional<BBox> optional_box(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return as_box(*it, at_key(path, key));
}

std::optional<std::vector<BBox>> optional_boxes(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  const std::string p = at_key(path, key);
  if (!it->is_array()) throw SchemaError(p, "expected an array of boxes");
  std::vector<BBox> out;
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(as_box((*it)[i], at_index(p, i)));
  return out;
}

json box_json(const BBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
}

Cell cell_from_json(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
  Cell c;
  c.row_start = as_count(require(v, path, "row_start"), at_key(path, "row_start"));
  c.row_end = as_count(require(v, path, "row_end"), at_key(path, "row_end"));
  c.col_start = as_count(require(v, path, "col_start"), at_key(path, "col_start"));
  c.col_end = as_count(require(v, path, "col_end"), at_key(path, "col_end"));
  if (c.row_end < c.row_start) throw SchemaError(at_key(path, "row_end"), "row_end < row_start");
  if (c.col_end < c.col_start) throw SchemaError(at_key(path, "col_end"), "col_end < col_start");
  if (auto it = v.find("text"); it != v.end() && !it->is_null()) c.text = as_string(*it, at_key(path, "text"));
  c.is_column_header = as_bool(v, path, "is_column_header");
  c.is_projected_row_header = as_bool(v, path, "is_projected_row_header");
  c.is_row_header = as_bool(v, path, "is_row_header");
  c.text_box = optional_box(v, path, "text_bbox");
  c.grid_box = optional_box(v, path, "grid_bbox");
  if (c.text_box && c.blank()) throw SchemaError(at_key(path, "text_bbox"), "blank cell cannot have a text box");
  if (c.is_projected_row_header) {
    if (c.row_start != c.row_end) {
      throw SchemaError(at_key(path, "is_projected_row_header"), "projected row header must occupy one row");
    }
    if (c.is_column_header) {
      throw SchemaError(at_key(path, "is_projected_row_header"), "cell cannot be both column header and PRH");
    }
  }
  return c;
}

json cell_json(const Cell& c) {
  json v{{"row_start", c.row_start}, {"row_end", c.row_end}, {"col_start", c.col_start},
         {"col_end", c.col_end},     {"text", c.text},       {"is_column_header", c.is_column_header},
         {"is_projected_row_header", c.is_projected_row_header}, {"is_row_header", c.is_row_header}};
  if (c.text_box) v["text_bbox"] = box_json(*c.text_box);
  if (c.grid_box) v["grid_bbox"] = box_json(*c.grid_box);
  return v;
}

}  // namespace

TableAnnotation table_from_json_text(std::string_view json_text) {
  const json doc = parse_json(json_text);
  const std::string root = "$";
  if (!doc.is_object()) throw SchemaError(root, "expected an object");
  TableAnnotation t;
  t.n_rows = as_count(require(doc, root, "n_rows"), "$.n_rows");
  t.n_cols = as_count(require(doc, root, "n_cols"), "$.n_cols");
  const json& cells = require(doc, root, "cells");
  if (!cells.is_array()) throw SchemaError("$.cells", "expected an array");
  for (std::size_t i = 0; i < cells.size(); ++i) t.cells.push_back(cell_from_json(cells[i], at_index("$.cells", i)));
  t.rows = optional_boxes(doc, root, "rows");
  t.columns = optional_boxes(doc, root, "columns");
  if (t.rows && static_cast<int>(t.rows->size()) != t.n_rows) throw SchemaError("$.rows", "expected n_rows boxes");
  if (t.columns && static_cast<int>(t.columns->size()) != t.n_cols) {
    throw SchemaError("$.columns", "expected n_cols boxes");
  }
  t.table_box = optional_box(doc, root, "table_bbox");
  t.rotated = as_bool(doc, root, "rotated");
  try {
    (void)build_grid(t);
  } catch (const GridError& e) {
    throw SchemaError("$.cells", e.what());
  }
  return t;
}

std::string table_to_json_text(const TableAnnotation& t) {
  json doc{{"n_rows", t.n_rows}, {"n_cols", t.n_cols}, {"rotated", t.rotated}};
  if (t.table_box) doc["table_bbox"] = box_json(*t.table_box);
  if (t.rows) {
    json rows = json::array();
    for (const auto& b : *t.rows) rows.push_back(box_json(b));
    doc["rows"] = std::move(rows);
  }
  if (t.columns) {
    json cols = json::array();
    for (const auto& b : *t.columns) cols.push_back(box_json(b));
    doc["columns"] = std::move(cols);
  }
  json cells = json::array();
  for (const auto& c : t.cells) cells.push_back(cell_json(c));
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

TokenSequence tokens_from_json_text(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  TokenSequence seq;
  const std::string g = as_string(require(doc, "$", "granularity"), "$.granularity");
  if (g == "char") {
    seq.granularity = Granularity::Character;
  } else if (g == "word") {
    seq.granularity = Granularity::Word;
  } else {
    throw SchemaError("$.granularity", "expected \"char\" or \"word\"");
  }
  const json& tokens = require(doc, "$", "tokens");
  if (!tokens.is_array()) throw SchemaError("$.tokens", "expected an array");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string path = at_index("$.tokens", i);
    const json& v = tokens[i];
    if (!v.is_object()) throw SchemaError(path, "expected an object");
    Token tok;
    tok.text = as_string(require(v, path, "text"), at_key(path, "text"));
    if (tok.text.empty()) throw SchemaError(at_key(path, "text"), "token text must be non-empty");
    if (seq.granularity == Granularity::Character && text::decode_utf8(tok.text).size() != 1) {
      throw SchemaError(at_key(path, "text"), "character token must hold exactly one character");
    }
    tok.box = as_box(require(v, path, "bbox"), at_key(path, "bbox"));
    seq.tokens.push_back(std::move(tok));
  }
  return seq;
}

std::string tokens_to_json_text(const TokenSequence& seq) {
  json tokens = json::array();
  for (const auto& t : seq.tokens) tokens.push_back({{"text", t.text}, {"bbox", box_json(t.box)}});
  json doc{{"granularity", seq.granularity == Granularity::Character ? "char" : "word"},
           {"tokens", std::move(tokens)}};
  return doc.dump(2) + "\n";
}

std::vector<AnnotatedObject> objects_from_json_text(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_array()) throw SchemaError("$", "expected an array of objects");
  std::vector<AnnotatedObject> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = at_index("$", i);
    const json& v = doc[i];
    if (!v.is_object()) throw SchemaError(path, "expected an object");
    const std::string name = as_string(require(v, path, "category"), at_key(path, "category"));
    auto cat = parse_category(name);
    if (!cat) throw SchemaError(at_key(path, "category"), "unknown category '" + name + "'");
    AnnotatedObject obj;
    obj.category = *cat;
    obj.box = as_box(require(v, path, "bbox"), at_key(path, "bbox"));
    if (auto it = v.find("score"); it != v.end()) obj.score = as_number(*it, at_key(path, "score"));
    out.push_back(obj);
  }
  return out;
}

std::string objects_to_json_text(const std::vector<AnnotatedObject>& objects) {
  json doc = json::array();
  for (const auto& o : objects) {
    doc.push_back({{"category", std::string(category_name(o.category))}, {"bbox", box_json(o.box)}, {"score", o.score}});
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("cannot write " + path.string());
}

namespace {

template <typename F>
auto with_path(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const SchemaError& e) {
    throw SchemaError(path.string(), e.path(), e.message());
  }
}

}  // namespace

TableAnnotation load_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return with_path(path, [&] { return table_from_json_text(text); });
}

void save_table(const TableAnnotation& table, const std::filesystem::path& path) {
  write_file(path, table_to_json_text(table));
}

TokenSequence load_tokens(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return with_path(path, [&] { return tokens_from_json_text(text); });
}

void save_tokens(const TokenSequence& tokens, const std::filesystem::path& path) {
  write_file(path, tokens_to_json_text(tokens));
}

std::vector<AnnotatedObject> load_objects(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return with_path(path, [&] { return objects_from_json_text(text); });
}

void save_objects(const std::vector<AnnotatedObject>& objects, const std::filesystem::path& path) {
  write_file(path, objects_to_json_text(objects));
}

TableAnnotation load_table_any(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return parse_markup(read_file(path));
  return load_table(path);
}

}  // namespace tabcanon
