#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes one code point starting at `pos` and advances it. Invalid or
/// truncated sequences yield U+FFFD and consume a single byte.
char32_t next(std::string_view s, std::size_t& pos) noexcept;

/// True when `s` is well-formed UTF-8 (no overlongs, no surrogates).
bool valid(std::string_view s) noexcept;

void append(std::string& out, char32_t cp);

std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);

/// Splits into per-character UTF-8 substrings.
std::vector<std::string> characters(std::string_view s);

std::size_t length(std::string_view s) noexcept;

/// Simple case mapping for the Greek, Greek Extended, Coptic and ASCII letters.
char32_t to_lower(char32_t cp) noexcept;
std::string to_lower(std::string_view s);

}  // namespace webvec::utf8
