// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace orqa::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// ASCII alphanumerics plus every byte of a multi-byte UTF-8 sequence.
inline bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

inline bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) || (u >= 123 && u <= 126);
}

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string to_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Whitespace-delimited tokens, as views into `s`.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::size_t count_words(std::string_view s);

// Lowercases and strips leading/trailing ASCII punctuation.
std::string normalize_word(std::string_view word);

// Joins whitespace-separated tokens with single spaces.
std::string collapse_whitespace(std::string_view s);

// Byte offset of the `codepoint_index`-th code point of a UTF-8 string,
// or s.size() if the string is shorter.
std::size_t utf8_byte_offset(std::string_view s, std::size_t codepoint_index);

}  // namespace orqa::text
