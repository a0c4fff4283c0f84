#include "webvec/ingest/script.hpp"

#include "webvec/error.hpp"
#include "webvec/util/utf8.hpp"

#include <charconv>

namespace webvec::ingest {

namespace {

constexpr char32_t kAnoTeleia = 0x0387;
constexpr char32_t kGreekQuestionMark = 0x037E;

bool is_terminator(char32_t cp) {
    return cp == '.' || cp == '!' || cp == ';' || cp == '\n';
}

std::string_view trim_spaces(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

}  // namespace

ScriptRanges ScriptRanges::greek() {
    return ScriptRanges({{0x0370, 0x03FF}, {0x1F00, 0x1FFF}});
}

ScriptRanges ScriptRanges::latin() {
    return ScriptRanges({{'A', 'Z'}, {'a', 'z'}, {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x017F}});
}

ScriptRanges ScriptRanges::parse(std::string_view text) {
    if (text == "greek") return greek();
    if (text == "latin") return latin();
    std::vector<Range> ranges;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const auto dash = item.find('-');
        const auto parse_hex = [&](std::string_view h) {
            unsigned long v = 0;
            const auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), v, 16);
            if (ec != std::errc() || ptr != h.data() + h.size() || h.empty() || v > 0x10FFFF)
                throw UsageError("bad script range: " + std::string(item));
            return static_cast<char32_t>(v);
        };
        const char32_t lo = parse_hex(item.substr(0, dash));
        const char32_t hi = dash == std::string_view::npos ? lo : parse_hex(item.substr(dash + 1));
        if (hi < lo) throw UsageError("bad script range: " + std::string(item));
        ranges.emplace_back(lo, hi);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (ranges.empty()) throw UsageError("empty script specification");
    return ScriptRanges(std::move(ranges));
}

bool ScriptRanges::contains(char32_t cp) const noexcept {
    for (const auto& [lo, hi] : ranges_) {
        if (cp >= lo && cp <= hi) return true;
    }
    return false;
}

std::string filter_script(std::string_view text, const ScriptRanges& script) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = utf8::next(text, pos);
        if (cp == kGreekQuestionMark) cp = ';';
        const bool keep = cp != ' ' && cp != kAnoTeleia && (is_terminator(cp) || script.contains(cp));
        if (!keep) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        utf8::append(out, cp);
    }
    return out;
}

std::vector<std::string> segment_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    const auto flush = [&] {
        std::string sentence;
        bool space = false;
        for (const char c : trim_spaces(current)) {
            if (c == ' ') {
                space = true;
                continue;
            }
            if (space) sentence.push_back(' ');
            space = false;
            sentence.push_back(c);
        }
        if (!sentence.empty()) out.push_back(std::move(sentence));
        current.clear();
    };
    for (const char c : text) {
        if (c == '\n' || c == '.' || c == '!' || c == ';') {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return out;
}

}  // namespace webvec::ingest
