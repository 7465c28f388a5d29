// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hwk::unicode {

/// Strict decode; std::nullopt on any malformed or overlong sequence.
std::optional<std::u32string> decode(std::string_view utf8);

/// Lenient decode that drops malformed bytes.
std::u32string decode_lossy(std::string_view utf8);

std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

bool is_valid(std::string_view utf8);
std::size_t length(std::string_view utf8);

// Character classes backed by ICU properties.
bool is_punctuation(char32_t cp);  // general category P*
bool is_control(char32_t cp);      // Cc
bool is_unassigned(char32_t cp);   // Cn
bool is_whitespace(char32_t cp);
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_pictographic(char32_t cp);  // emoji and other So symbols
/// Letters, digits, combining marks, and '_': what a hashtag body may contain.
bool is_word(char32_t cp);

char32_t to_lower(char32_t cp);
std::u32string to_lower(std::u32string_view text);
std::string to_lower(std::string_view utf8);

}  // namespace hwk::unicode
