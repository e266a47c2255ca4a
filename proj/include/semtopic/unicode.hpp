#pragma once

// UTF-8 codec and the small amount of Unicode character classification the
// pipeline needs. Offsets everywhere in semtopic count Unicode scalar values.
//
// Classification is table-driven over the scripts and symbol blocks that show
// up in practice (Latin, Greek, Cyrillic, Armenian, Hebrew, Arabic, CJK,
// general punctuation, currency, emoji); it is not a full UCD.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "semtopic/error.hpp"

namespace semtopic::unicode {

namespace detail {

struct Range {
  char32_t lo;
  char32_t hi;
};

template <std::size_t N>
constexpr bool in_ranges(char32_t c, const Range (&table)[N]) {
  for (const auto& r : table) {
    if (c < r.lo) return false;
    if (c <= r.hi) return true;
  }
  return false;
}

// Sorted, non-overlapping. General category P* outside ASCII/Latin-1.
inline constexpr Range kPunctuation[] = {
    {0x037E, 0x037E}, {0x0387, 0x0387}, {0x055A, 0x055F}, {0x0589, 0x058A},
    {0x05BE, 0x05BE}, {0x05C0, 0x05C0}, {0x05C3, 0x05C3}, {0x05C6, 0x05C6},
    {0x05F3, 0x05F4}, {0x060C, 0x060D}, {0x061B, 0x061B}, {0x061E, 0x061F},
    {0x066A, 0x066D}, {0x06D4, 0x06D4}, {0x0964, 0x0965}, {0x0970, 0x0970},
    {0x2010, 0x2027}, {0x2030, 0x2043}, {0x2045, 0x2051}, {0x2053, 0x205E},
    {0x207D, 0x207E}, {0x208D, 0x208E}, {0x2308, 0x230B}, {0x2329, 0x232A},
    {0x2768, 0x2775}, {0x27C5, 0x27C6}, {0x27E6, 0x27EF}, {0x2983, 0x2998},
    {0x29D8, 0x29DB}, {0x29FC, 0x29FD}, {0x2CF9, 0x2CFC}, {0x2CFE, 0x2CFF},
    {0x2E00, 0x2E2E}, {0x2E30, 0x2E4F}, {0x3001, 0x3003}, {0x3008, 0x3011},
    {0x3014, 0x301F}, {0x3030, 0x3030}, {0x303D, 0x303D}, {0x30A0, 0x30A0},
    {0x30FB, 0x30FB}, {0xFD3E, 0xFD3F}, {0xFE10, 0xFE19}, {0xFE30, 0xFE52},
    {0xFE54, 0xFE61}, {0xFE63, 0xFE63}, {0xFE68, 0xFE68}, {0xFE6A, 0xFE6B},
    {0xFF01, 0xFF03}, {0xFF05, 0xFF0A}, {0xFF0C, 0xFF0F}, {0xFF1A, 0xFF1B},
    {0xFF1F, 0xFF20}, {0xFF3B, 0xFF3D}, {0xFF3F, 0xFF3F}, {0xFF5B, 0xFF5B},
    {0xFF5D, 0xFF5D}, {0xFF5F, 0xFF65},
};

// Symbols, format/control characters and private use: never word characters.
inline constexpr Range kNonWord[] = {
    {0x0080, 0x009F}, {0x00A2, 0x00A9}, {0x00AC, 0x00B1}, {0x00B4, 0x00B4},
    {0x00B8, 0x00B8}, {0x00D7, 0x00D7}, {0x00F7, 0x00F7}, {0x02C2, 0x02C5},
    {0x02D2, 0x02DF}, {0x0375, 0x0375}, {0x0384, 0x0385}, {0x0482, 0x0482},
    {0x200B, 0x200F}, {0x202A, 0x202E}, {0x2060, 0x206F}, {0x2070, 0x209F},
    {0x20A0, 0x20CF}, {0x2100, 0x2BFF}, {0x2E80, 0x2FFF}, {0x3004, 0x3004},
    {0x3012, 0x3013}, {0x3020, 0x3020}, {0xD800, 0xF8FF}, {0xFE00, 0xFE0F},
    {0xFEFF, 0xFEFF}, {0xFFE0, 0xFFFF}, {0x1F000, 0x1FAFF}, {0xE0000, 0xE007F},
};

inline constexpr Range kDecimalDigits[] = {
    {0x0030, 0x0039}, {0x0660, 0x0669}, {0x06F0, 0x06F9}, {0x07C0, 0x07C9},
    {0x0966, 0x096F}, {0x09E6, 0x09EF}, {0x0E50, 0x0E59}, {0xFF10, 0xFF19},
};

}  // namespace detail

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one scalar value starting at `pos`, advancing it. Throws
// EncodingError naming the byte offset of the first bad byte.
inline char32_t decode_one(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const std::size_t start = pos;
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    throw EncodingError(start, "invalid UTF-8 lead byte");
  }
  for (int i = 1; i <= extra; ++i) {
    if (start + i >= s.size()) throw EncodingError(start, "truncated UTF-8 sequence");
    const unsigned char b = byte(start + i);
    if ((b & 0xC0) != 0x80) throw EncodingError(start + i, "invalid UTF-8 continuation byte");
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min) throw EncodingError(start, "overlong UTF-8 sequence");
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
    throw EncodingError(start, "UTF-8 sequence encodes an invalid scalar value");
  pos = start + extra + 1;
  return cp;
}

inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_one(s, pos));
  return out;
}

inline void validate(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) decode_one(s, pos);
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) append_utf8(out, c);
  return out;
}

// Number of scalar values in a valid UTF-8 string.
inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

// The ASCII whitespace that text normalization folds.
constexpr bool is_ascii_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

constexpr bool is_space(char32_t c) {
  return is_ascii_space(c) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

constexpr bool is_decimal_digit(char32_t c) { return detail::in_ranges(c, detail::kDecimalDigits); }

constexpr bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    switch (c) {
      case '!': case '"': case '#': case '%': case '&': case '\'': case '(': case ')':
      case '*': case ',': case '-': case '.': case '/': case ':': case ';': case '?':
      case '@': case '[': case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  if (c < 0x100) {
    return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB ||
           c == 0xBF;
  }
  return detail::in_ranges(c, detail::kPunctuation);
}

constexpr bool is_letter(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (is_space(c) || is_punctuation(c) || is_decimal_digit(c)) return false;
  if (c >= 0xB2 && c <= 0xBE && c != 0xB5 && c != 0xBA) return false;  // Latin-1 No/Sk
  return !detail::in_ranges(c, detail::kNonWord);
}

// Letters (including combining marks), decimal digits and '_'.
constexpr bool is_word_char(char32_t c) { return c == '_' || is_decimal_digit(c) || is_letter(c); }

// Unicode simple lowercase mapping for the scripts listed above.
constexpr char32_t to_lower(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return 0x69;
    if (c == 0x178) return 0xFF;
    if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) return (c % 2 == 0) ? c + 1 : c;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
    return c;
  }
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 37;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 63;
  if ((c >= 0x391 && c <= 0x3A1) || (c >= 0x3A3 && c <= 0x3AB)) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if ((c >= 0x460 && c <= 0x481) || (c >= 0x48A && c <= 0x4BF) || (c >= 0x4D0 && c <= 0x52F))
    return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x4C0) return 0x4CF;
  if (c >= 0x4C1 && c <= 0x4CE) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x531 && c <= 0x556) return c + 0x30;
  if (c == 0x1E9E) return 0xDF;
  if ((c >= 0x1E00 && c <= 0x1E95) || (c >= 0x1EA0 && c <= 0x1EFF)) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0xFF21 && c <= 0xFF3A) return c + 0x20;
  return c;
}

}  // namespace semtopic::unicode
