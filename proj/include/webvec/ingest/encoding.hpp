#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace webvec::ingest {

enum class Encoding { kUtf8, kIso8859_7, kWindows1253 };

/// Canonical lowercase label: "utf-8", "iso-8859-7", "windows-1253".
std::string_view label(Encoding enc) noexcept;

/// Maps a charset name (any common alias, case-insensitive) to a supported
/// encoding; nullopt for anything else.
std::optional<Encoding> parse_label(std::string_view name);

/// True when every byte sequence of `body` maps to a character. C1 control
/// bytes do not count as clean under the single-byte code pages.
bool decodes_cleanly(std::string_view body, Encoding enc);

/// Picks the encoding of a page body. Order: UTF-8 BOM, then the declared
/// charset if the body decodes cleanly under it, then byte statistics
/// (UTF-8 validity, Greek letter ranges of the legacy code pages), then UTF-8.
Encoding detect_encoding(std::string_view body, std::optional<std::string_view> declared);

struct DecodedText {
    std::string text;       ///< UTF-8
    bool replaced = false;  ///< some bytes became U+FFFD
};

/// Decodes to UTF-8. A leading UTF-8 BOM is dropped.
DecodedText decode(std::string_view body, Encoding enc);

/// Encodes UTF-8 text into a single-byte Greek code page. Characters without
/// a mapping become '?'.
std::string encode_legacy(std::string_view utf8_text, Encoding enc);

}  // namespace webvec::ingest
