// Copyright 2026 The oie-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OIE_UNICODE_HPP_
#define OIE_UNICODE_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace oie::unicode {

struct CodeRange {
  char32_t lo;
  char32_t hi;
};

struct CaseMapping {
  char32_t from;
  char32_t to;
};

#include "oie/unicode_tables.inc"

// Decodes one UTF-8 sequence starting at `pos`. Returns the code point and
// advances `pos`, or std::nullopt (leaving `pos` untouched) on a malformed,
// overlong or surrogate sequence.
inline std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& pos) {
  if (pos >= s.size()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return std::nullopt;
  }
  if (pos + len > s.size()) return std::nullopt;
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  pos += len;
  return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Byte offset of the first invalid sequence, or npos when `s` is valid UTF-8.
inline std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t at = pos;
    if (!decode_utf8(s, pos)) return at;
  }
  return std::string_view::npos;
}

inline bool is_punctuation(char32_t cp) {
  const auto* end = std::end(kPunctuationRanges);
  const auto* it = std::upper_bound(
      std::begin(kPunctuationRanges), end, cp,
      [](char32_t c, const CodeRange& r) { return c < r.lo; });
  if (it == std::begin(kPunctuationRanges)) return false;
  --it;
  return cp <= it->hi;
}

inline char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  const auto* end = std::end(kLowercaseMappings);
  const auto* it = std::lower_bound(
      std::begin(kLowercaseMappings), end, cp,
      [](const CaseMapping& m, char32_t c) { return m.from < c; });
  return (it != end && it->from == cp) ? it->to : cp;
}

// Drops punctuation code points and lowercases the rest. Bytes that do not
// decode become U+FFFD so the transform stays idempotent.
inline std::string strip_punctuation_lower(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  std::size_t pos = 0;
  while (pos < token.size()) {
    const std::size_t at = pos;
    auto cp = decode_utf8(token, pos);
    if (!cp) {
      append_utf8(out, 0xFFFD);
      pos = at + 1;
      continue;
    }
    if (is_punctuation(*cp)) continue;
    append_utf8(out, to_lower(*cp));
  }
  return out;
}

}  // namespace oie::unicode

#endif  // OIE_UNICODE_HPP_
