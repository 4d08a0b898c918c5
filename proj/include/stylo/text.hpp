#pragma once

// Unicode-aware text primitives shared by cleaning, n-gram extraction and
// style profiling. Input is UTF-8; invalid bytes decode to U+FFFD.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stylo::text {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset of the first code unit
  std::size_t length;  // number of code units
};

std::vector<CodePoint> decode(std::string_view utf8);
void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);
bool is_digit(char32_t cp);
bool is_letter(char32_t cp);
char32_t to_lower(char32_t cp);

std::string lowercase(std::string_view utf8);
std::size_t count_code_points(std::string_view utf8);

// A word is any maximal run of non-whitespace code points.
struct WordSpan {
  std::size_t begin;  // byte offsets into the source string
  std::size_t end;
};

std::vector<WordSpan> word_spans(std::string_view utf8);
std::size_t count_words(std::string_view utf8);

// Lowercases and strips leading/trailing characters that are neither letters
// nor digits. May return an empty string.
std::string normalize_token(std::string_view token);

bool contains_digit(std::string_view utf8);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);

}  // namespace stylo::text
