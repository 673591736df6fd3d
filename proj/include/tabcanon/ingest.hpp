#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tabcanon/bbox.hpp"
#include "tabcanon/model.hpp"

namespace tabcanon {

enum class Granularity { Character, Word };

struct Token {
  std::string text;
  BBox box;
  friend bool operator==(const Token&, const Token&) = default;
};

/// Page text in the extractor's reading order.
struct TokenSequence {
  std::vector<Token> tokens;
  Granularity granularity = Granularity::Word;
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/// Parses the table subset of HTML: table, thead, tbody, tfoot, tr, td, th
/// with rowspan/colspan. Inline markup inside a cell contributes its text.
/// A bare run of <tr> rows is read as an implicit table.
/// Throws MarkupError on malformed structure and RaggedGridError when the
/// rows do not tile a rectangle.
TableAnnotation parse_markup(std::string_view markup);

// JSON file formats. Loaders throw SchemaError carrying the JSON path of the
// offending field, and loaded tables are checked with build_grid.
TableAnnotation table_from_json_text(std::string_view json_text);
std::string table_to_json_text(const TableAnnotation& table);
TokenSequence tokens_from_json_text(std::string_view json_text);
std::string tokens_to_json_text(const TokenSequence& tokens);
std::vector<AnnotatedObject> objects_from_json_text(std::string_view json_text);
std::string objects_to_json_text(const std::vector<AnnotatedObject>& objects);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

TableAnnotation load_table(const std::filesystem::path& path);
void save_table(const TableAnnotation& table, const std::filesystem::path& path);
TokenSequence load_tokens(const std::filesystem::path& path);
void save_tokens(const TokenSequence& tokens, const std::filesystem::path& path);
std::vector<AnnotatedObject> load_objects(const std::filesystem::path& path);
void save_objects(const std::vector<AnnotatedObject>& objects, const std::filesystem::path& path);

/// `.html`/`.htm` files go through parse_markup, everything else through load_table.
TableAnnotation load_table_any(const std::filesystem::path& path);

}  // namespace tabcanon
