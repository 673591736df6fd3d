#pragma once

#include <string>
#include <string_view>

namespace tabcanon::text {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

bool is_space(char32_t c) noexcept;

/// Empty after stripping Unicode whitespace.
bool is_blank(std::string_view s);

/// Trims and collapses every whitespace run to one ASCII space.
std::string normalize_whitespace(std::string_view s);

/// All non-whitespace code points, in order.
std::u32string non_whitespace(std::string_view s);

std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// Levenshtein distance divided by the longer length; 0 when both are empty.
double normalized_edit_distance(std::u32string_view a, std::u32string_view b);

std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

}  // namespace tabcanon::text
