#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace matex {

// Span offsets throughout the library are Unicode code point offsets (the
// brat standoff convention), not byte offsets. Bytes that do not form valid
// UTF-8 are treated as one code point each.

struct Codepoint {
  char32_t value;
  std::size_t byte_offset;
  std::size_t byte_len;
};

std::vector<Codepoint> utf8_decode(const std::string& text);

// number of code points
std::size_t cp_length(const std::string& text);

// substring by code point range [start, end)
std::string cp_slice(const std::string& text, std::size_t start, std::size_t end);

std::string trim(const std::string& s);
std::string collapse_spaces(const std::string& s);  // runs of ASCII whitespace -> one ' '
std::string ascii_lower(const std::string& s);
bool icontains(const std::string& haystack, const std::string& needle);
std::vector<std::string> split(const std::string& s, char delim);

}  // namespace matex
