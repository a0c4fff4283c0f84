#include "webvec/ingest/encoding.hpp"

#include "webvec/error.hpp"
#include "webvec/util/utf8.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace webvec::ingest {

namespace {

using HighTable = std::array<char16_t, 128>;

// Bytes 0x80..0xFF; 0 marks an unassigned byte.
constexpr HighTable kIso8859_7 = {
    0x0080, 0x0081, 0x0082, 0x0083, 0x0084, 0x0085, 0x0086, 0x0087,
    0x0088, 0x0089, 0x008A, 0x008B, 0x008C, 0x008D, 0x008E, 0x008F,
    0x0090, 0x0091, 0x0092, 0x0093, 0x0094, 0x0095, 0x0096, 0x0097,
    0x0098, 0x0099, 0x009A, 0x009B, 0x009C, 0x009D, 0x009E, 0x009F,
    0x00A0, 0x2018, 0x2019, 0x00A3, 0x20AC, 0x20AF, 0x00A6, 0x00A7,
    0x00A8, 0x00A9, 0x037A, 0x00AB, 0x00AC, 0x00AD, 0x0000, 0x2015,
    0x00B0, 0x00B1, 0x00B2, 0x00B3, 0x0384, 0x0385, 0x0386, 0x00B7,
    0x0388, 0x0389, 0x038A, 0x00BB, 0x038C, 0x00BD, 0x038E, 0x038F,
    0x0390, 0x0391, 0x0392, 0x0393, 0x0394, 0x0395, 0x0396, 0x0397,
    0x0398, 0x0399, 0x039A, 0x039B, 0x039C, 0x039D, 0x039E, 0x039F,
    0x03A0, 0x03A1, 0x0000, 0x03A3, 0x03A4, 0x03A5, 0x03A6, 0x03A7,
    0x03A8, 0x03A9, 0x03AA, 0x03AB, 0x03AC, 0x03AD, 0x03AE, 0x03AF,
    0x03B0, 0x03B1, 0x03B2, 0x03B3, 0x03B4, 0x03B5, 0x03B6, 0x03B7,
    0x03B8, 0x03B9, 0x03BA, 0x03BB, 0x03BC, 0x03BD, 0x03BE, 0x03BF,
    0x03C0, 0x03C1, 0x03C2, 0x03C3, 0x03C4, 0x03C5, 0x03C6, 0x03C7,
    0x03C8, 0x03C9, 0x03CA, 0x03CB, 0x03CC, 0x03CD, 0x03CE, 0x0000,
};

constexpr HighTable kWindows1253 = {
    0x20AC, 0x0000, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x0000, 0x2030, 0x0000, 0x2039, 0x0000, 0x0000, 0x0000, 0x0000,
    0x0000, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x0000, 0x2122, 0x0000, 0x203A, 0x0000, 0x0000, 0x0000, 0x0000,
    0x00A0, 0x0385, 0x0386, 0x00A3, 0x00A4, 0x00A5, 0x00A6, 0x00A7,
    0x00A8, 0x00A9, 0x0000, 0x00AB, 0x00AC, 0x00AD, 0x00AE, 0x2015,
    0x00B0, 0x00B1, 0x00B2, 0x00B3, 0x0384, 0x00B5, 0x00B6, 0x00B7,
    0x0388, 0x0389, 0x038A, 0x00BB, 0x038C, 0x00BD, 0x038E, 0x038F,
    0x0390, 0x0391, 0x0392, 0x0393, 0x0394, 0x0395, 0x0396, 0x0397,
    0x0398, 0x0399, 0x039A, 0x039B, 0x039C, 0x039D, 0x039E, 0x039F,
    0x03A0, 0x03A1, 0x0000, 0x03A3, 0x03A4, 0x03A5, 0x03A6, 0x03A7,
    0x03A8, 0x03A9, 0x03AA, 0x03AB, 0x03AC, 0x03AD, 0x03AE, 0x03AF,
    0x03B0, 0x03B1, 0x03B2, 0x03B3, 0x03B4, 0x03B5, 0x03B6, 0x03B7,
    0x03B8, 0x03B9, 0x03BA, 0x03BB, 0x03BC, 0x03BD, 0x03BE, 0x03BF,
    0x03C0, 0x03C1, 0x03C2, 0x03C3, 0x03C4, 0x03C5, 0x03C6, 0x03C7,
    0x03C8, 0x03C9, 0x03CA, 0x03CB, 0x03CC, 0x03CD, 0x03CE, 0x0000,
};

const HighTable& table_for(Encoding enc) {
    return enc == Encoding::kIso8859_7 ? kIso8859_7 : kWindows1253;
}

bool has_bom(std::string_view body) {
    return body.size() >= 3 && static_cast<unsigned char>(body[0]) == 0xEF &&
           static_cast<unsigned char>(body[1]) == 0xBB && static_cast<unsigned char>(body[2]) == 0xBF;
}

// Byte values that are Greek letters in both code pages.
bool greek_letter_byte(unsigned char b) {
    return b == 0xB6 || (b >= 0xB8 && b <= 0xBA) || b == 0xBC || (b >= 0xBE && b <= 0xFE && b != 0xD2);
}

std::optional<Encoding> statistical_guess(std::string_view body) {
    std::size_t high = 0;
    std::size_t letters = 0;
    bool cp1253_only = false;  // bytes printable only in windows-1253
    bool has_a2 = false;
    bool has_b6 = false;
    for (const char ch : body) {
        const auto b = static_cast<unsigned char>(ch);
        if (b < 0x80) continue;
        ++high;
        if (greek_letter_byte(b) || b == 0xA2) ++letters;
        if (b < 0xA0 && kWindows1253[b - 0x80] != 0) cp1253_only = true;
        has_a2 |= b == 0xA2;
        has_b6 |= b == 0xB6;
    }
    if (high == 0 || 2 * letters < high) return std::nullopt;
    const Encoding first =
        (cp1253_only || (has_a2 && !has_b6)) ? Encoding::kWindows1253 : Encoding::kIso8859_7;
    const Encoding second =
        first == Encoding::kWindows1253 ? Encoding::kIso8859_7 : Encoding::kWindows1253;
    if (decodes_cleanly(body, first)) return first;
    if (decodes_cleanly(body, second)) return second;
    return first;
}

}  // namespace

std::string_view label(Encoding enc) noexcept {
    switch (enc) {
        case Encoding::kUtf8: return "utf-8";
        case Encoding::kIso8859_7: return "iso-8859-7";
        case Encoding::kWindows1253: return "windows-1253";
    }
    return "utf-8";
}

std::optional<Encoding> parse_label(std::string_view name) {
    std::string n;
    for (const char c : name) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'') continue;
        n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (n == "utf-8" || n == "utf8" || n == "unicode-1-1-utf-8") return Encoding::kUtf8;
    if (n == "iso-8859-7" || n == "iso8859-7" || n == "iso_8859-7" || n == "iso-ir-126" ||
        n == "greek" || n == "greek8" || n == "elot_928" || n == "ecma-118" || n == "csisolatingreek" ||
        n == "iso_8859-7:1987" || n == "sun_eu_greek")
        return Encoding::kIso8859_7;
    if (n == "windows-1253" || n == "cp1253" || n == "x-cp1253" || n == "win-1253")
        return Encoding::kWindows1253;
    return std::nullopt;
}

bool decodes_cleanly(std::string_view body, Encoding enc) {
    if (enc == Encoding::kUtf8) return utf8::valid(body);
    const HighTable& table = table_for(enc);
    return std::all_of(body.begin(), body.end(), [&](char ch) {
        const auto b = static_cast<unsigned char>(ch);
        if (b < 0x80) return true;
        const char16_t cp = table[b - 0x80];
        return cp != 0 && !(cp >= 0x80 && cp < 0xA0);
    });
}

Encoding detect_encoding(std::string_view body, std::optional<std::string_view> declared) {
    if (has_bom(body)) return Encoding::kUtf8;
    if (declared) {
        if (const auto enc = parse_label(*declared); enc && decodes_cleanly(body, *enc)) return *enc;
    }
    if (utf8::valid(body)) return Encoding::kUtf8;
    if (const auto guess = statistical_guess(body)) return *guess;
    return Encoding::kUtf8;
}

DecodedText decode(std::string_view body, Encoding enc) {
    DecodedText out;
    if (enc == Encoding::kUtf8) {
        if (has_bom(body)) body.remove_prefix(3);
        out.text.reserve(body.size());
        std::size_t pos = 0;
        while (pos < body.size()) {
            const std::size_t before = pos;
            const char32_t cp = utf8::next(body, pos);
            if (cp == utf8::kReplacement && pos - before != 3) out.replaced = true;
            utf8::append(out.text, cp);
        }
        return out;
    }
    const HighTable& table = table_for(enc);
    out.text.reserve(body.size() * 2);
    for (const char ch : body) {
        const auto b = static_cast<unsigned char>(ch);
        if (b < 0x80) {
            out.text.push_back(ch);
            continue;
        }
        const char16_t cp = table[b - 0x80];
        if (cp == 0) {
            out.replaced = true;
            utf8::append(out.text, utf8::kReplacement);
        } else {
            utf8::append(out.text, cp);
        }
    }
    return out;
}

std::string encode_legacy(std::string_view utf8_text, Encoding enc) {
    if (enc == Encoding::kUtf8) throw UsageError("encode_legacy needs a single-byte code page");
    const HighTable& table = table_for(enc);
    std::string out;
    std::size_t pos = 0;
    while (pos < utf8_text.size()) {
        const char32_t cp = utf8::next(utf8_text, pos);
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
            continue;
        }
        const auto it = std::find(table.begin(), table.end(), static_cast<char16_t>(cp));
        out.push_back(it == table.end() || cp > 0xFFFF ? '?'
                                                      : static_cast<char>(0x80 + (it - table.begin())));
    }
    return out;
}

}  // namespace webvec::ingest
