#include "matex/text.hpp"

#include <algorithm>
#include <cctype>

namespace matex {

std::vector<Codepoint> utf8_decode(const std::string& text) {
  std::vector<Codepoint> out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    char32_t value = c;
    if (c >= 0xF0)
      len = 4;
    else if (c >= 0xE0)
      len = 3;
    else if (c >= 0xC0)
      len = 2;
    if (len > 1) {
      if (i + len > n) len = 1;  // truncated sequence, fall back to raw byte
      for (std::size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
          len = 1;  // malformed continuation, fall back to raw byte
          break;
        }
      }
    }
    if (len == 2)
      value = ((c & 0x1Fu) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu);
    else if (len == 3)
      value = ((c & 0x0Fu) << 12) | ((static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 6) |
              (static_cast<unsigned char>(text[i + 2]) & 0x3Fu);
    else if (len == 4)
      value = ((c & 0x07u) << 18) | ((static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 12) |
              ((static_cast<unsigned char>(text[i + 2]) & 0x3Fu) << 6) |
              (static_cast<unsigned char>(text[i + 3]) & 0x3Fu);
    out.push_back({value, i, len});
    i += len;
  }
  return out;
}

std::size_t cp_length(const std::string& text) { return utf8_decode(text).size(); }

std::string cp_slice(const std::string& text, std::size_t start, std::size_t end) {
  if (start >= end) return {};
  const auto cps = utf8_decode(text);
  if (start >= cps.size()) return {};
  const std::size_t byte_start = cps[start].byte_offset;
  const std::size_t byte_end =
      end >= cps.size() ? text.size() : cps[end].byte_offset;
  return text.substr(byte_start, byte_end - byte_start);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string collapse_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

std::string ascii_lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool icontains(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return true;
  return ascii_lower(haystack).find(ascii_lower(needle)) != std::string::npos;
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

}  // namespace matex
