#include "webvec/util/utf8.hpp"

namespace webvec::utf8 {

char32_t next(std::string_view s, std::size_t& pos) noexcept {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    std::size_t extra = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1; cp = lead & 0x1F; min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2; cp = lead & 0x0F; min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3; cp = lead & 0x07; min = 0x10000;
    } else {
        ++pos;
        return kReplacement;
    }
    if (pos + extra >= s.size()) {
        ++pos;
        return kReplacement;
    }
    for (std::size_t i = 1; i <= extra; ++i) {
        const unsigned char c = byte(pos + i);
        if ((c & 0xC0) != 0x80) {
            ++pos;
            return kReplacement;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return kReplacement;
    }
    pos += extra + 1;
    return cp;
}

bool valid(std::string_view s) noexcept {
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t before = pos;
        const char32_t cp = next(s, pos);
        if (cp == kReplacement) {
            // A literal U+FFFD is three bytes long; a decoding failure consumes one.
            if (pos - before != 3) return false;
        }
    }
    return true;
}

void append(std::string& out, char32_t cp) {
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

std::u32string decode(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) out.push_back(next(s, pos));
    return out;
}

std::string encode(std::u32string_view s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (char32_t cp : s) append(out, cp);
    return out;
}

std::vector<std::string> characters(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t start = pos;
        next(s, pos);
        out.emplace_back(s.substr(start, pos - start));
    }
    return out;
}

std::size_t length(std::string_view s) noexcept {
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        next(s, pos);
        ++n;
    }
    return n;
}

char32_t to_lower(char32_t cp) noexcept {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
    if (cp >= 0x0370 && cp <= 0x03FF) {
        if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 0x20;
        switch (cp) {
            case 0x0370: case 0x0372: case 0x0376: return cp + 1;
            case 0x037F: return 0x03F3;
            case 0x0386: return 0x03AC;
            case 0x0388: case 0x0389: case 0x038A: return cp + 0x25;
            case 0x038C: return 0x03CC;
            case 0x038E: case 0x038F: return cp + 0x3F;
            case 0x03CF: return 0x03D7;
            case 0x03F4: return 0x03B8;
            case 0x03F7: return 0x03F8;
            case 0x03F9: return 0x03F2;
            case 0x03FA: return 0x03FB;
            case 0x03FD: case 0x03FE: case 0x03FF: return cp - 0x82;
            default: break;
        }
        if (cp >= 0x03D8 && cp <= 0x03EF && cp % 2 == 0) return cp + 1;
        return cp;
    }
    if (cp >= 0x1F00 && cp <= 0x1FFF) {
        const char32_t low = cp & 0x0F;
        const char32_t row = cp & 0xFFF0;
        // Rows whose upper half holds capitals (and titlecase forms) of the lower half.
        switch (row) {
            case 0x1F00: case 0x1F10: case 0x1F20: case 0x1F30: case 0x1F40: case 0x1F60:
            case 0x1F80: case 0x1F90: case 0x1FA0:
                return low >= 8 ? cp - 8 : cp;
            case 0x1F50:
                return (low == 0x9 || low == 0xB || low == 0xD || low == 0xF) ? cp - 8 : cp;
            default: break;
        }
        switch (cp) {
            case 0x1FB8: case 0x1FB9: case 0x1FD8: case 0x1FD9: case 0x1FE8: case 0x1FE9: return cp - 8;
            case 0x1FBA: case 0x1FBB: return cp - 0x4A;
            case 0x1FBC: return 0x1FB3;
            case 0x1FC8: case 0x1FC9: case 0x1FCA: case 0x1FCB: return cp - 0x56;
            case 0x1FCC: return 0x1FC3;
            case 0x1FDA: case 0x1FDB: return cp - 0x64;
            case 0x1FEA: case 0x1FEB: return cp - 0x70;
            case 0x1FEC: return 0x1FE5;
            case 0x1FF8: case 0x1FF9: return cp - 0x80;
            case 0x1FFA: case 0x1FFB: return cp - 0x7E;
            case 0x1FFC: return 0x1FF3;
            default: return cp;
        }
    }
    return cp;
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) append(out, to_lower(next(s, pos)));
    return out;
}

}  // namespace webvec::utf8
