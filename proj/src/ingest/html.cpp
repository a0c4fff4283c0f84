#include "webvec/ingest/html.hpp"

#include "webvec/util/utf8.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace webvec::ingest {

namespace {

const std::unordered_set<std::string_view>& block_tags() {
    static const std::unordered_set<std::string_view> tags = {
        "address", "article", "aside", "blockquote", "body", "caption", "center", "dd", "details",
        "dialog", "dir", "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer", "form",
        "frame", "frameset", "h1", "h2", "h3", "h4", "h5", "h6", "head", "header", "hgroup",
        "hr", "html", "iframe", "legend", "li", "main", "menu", "nav", "ol", "option", "p", "pre",
        "section", "select", "summary", "table", "tbody", "td", "textarea", "tfoot", "th",
        "thead", "title", "tr", "ul"};
    return tags;
}

// Elements whose content is never text.
bool raw_discard(std::string_view tag) {
    return tag == "script" || tag == "style" || tag == "template" || tag == "svg" || tag == "math";
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
    static const std::unordered_map<std::string_view, char32_t> map = {
        {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''}, {"nbsp", ' '},
        {"laquo", 0xAB}, {"raquo", 0xBB}, {"middot", 0xB7}, {"copy", 0xA9}, {"reg", 0xAE},
        {"trade", 0x2122}, {"euro", 0x20AC}, {"hellip", 0x2026}, {"mdash", 0x2014},
        {"ndash", 0x2013}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
        {"rdquo", 0x201D}, {"bull", 0x2022}, {"deg", 0xB0}, {"sect", 0xA7}, {"shy", 0xAD},
        {"times", 0xD7}, {"divide", 0xF7}, {"plusmn", 0xB1}, {"para", 0xB6},
        {"Alpha", 0x391}, {"Beta", 0x392}, {"Gamma", 0x393}, {"Delta", 0x394},
        {"Epsilon", 0x395}, {"Zeta", 0x396}, {"Eta", 0x397}, {"Theta", 0x398}, {"Iota", 0x399},
        {"Kappa", 0x39A}, {"Lambda", 0x39B}, {"Mu", 0x39C}, {"Nu", 0x39D}, {"Xi", 0x39E},
        {"Omicron", 0x39F}, {"Pi", 0x3A0}, {"Rho", 0x3A1}, {"Sigma", 0x3A3}, {"Tau", 0x3A4},
        {"Upsilon", 0x3A5}, {"Phi", 0x3A6}, {"Chi", 0x3A7}, {"Psi", 0x3A8}, {"Omega", 0x3A9},
        {"alpha", 0x3B1}, {"beta", 0x3B2}, {"gamma", 0x3B3}, {"delta", 0x3B4},
        {"epsilon", 0x3B5}, {"zeta", 0x3B6}, {"eta", 0x3B7}, {"theta", 0x3B8}, {"iota", 0x3B9},
        {"kappa", 0x3BA}, {"lambda", 0x3BB}, {"mu", 0x3BC}, {"nu", 0x3BD}, {"xi", 0x3BE},
        {"omicron", 0x3BF}, {"pi", 0x3C0}, {"rho", 0x3C1}, {"sigmaf", 0x3C2}, {"sigma", 0x3C3},
        {"tau", 0x3C4}, {"upsilon", 0x3C5}, {"phi", 0x3C6}, {"chi", 0x3C7}, {"psi", 0x3C8},
        {"omega", 0x3C9}};
    return map;
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Case-insensitive search for `needle` (already lowercase) from `from`.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
    if (needle.empty() || hay.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(hay[i + j])) != needle[j]) {
                match = false;
                break;
            }
        }
        if (match) return i;
    }
    return std::string_view::npos;
}

/// Accumulates the current block. Each appended byte carries an "inside a
/// link" bit so link words can be counted after whitespace collapsing.
class BlockBuilder {
public:
    void append(std::string_view decoded, bool in_link) {
        for (const char c : decoded) {
            if (is_space(c)) {
                pending_space_ = !text_.empty();
                continue;
            }
            if (pending_space_) {
                text_.push_back(' ');
                link_.push_back(false);
                pending_space_ = false;
            }
            text_.push_back(c);
            link_.push_back(in_link);
        }
    }

    void space() { pending_space_ = !text_.empty(); }

    void flush(std::vector<TextBlock>& out) {
        if (!text_.empty()) {
            TextBlock block;
            std::size_t i = 0;
            while (i < text_.size()) {
                if (text_[i] == ' ') {
                    ++i;
                    continue;
                }
                bool linked = false;
                while (i < text_.size() && text_[i] != ' ') linked |= link_[i++];
                ++block.word_count;
                if (linked) ++block.link_word_count;
            }
            block.text = std::move(text_);
            out.push_back(std::move(block));
        }
        text_.clear();
        link_.clear();
        pending_space_ = false;
    }

private:
    std::string text_;
    std::vector<bool> link_;
    bool pending_space_ = false;
};

}  // namespace

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        const std::size_t semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 32) {
            out.push_back(text[i++]);
            continue;
        }
        const std::string_view name = text.substr(i + 1, semi - i - 1);
        if (name.size() >= 2 && name[0] == '#') {
            unsigned long cp = 0;
            const bool hex = name[1] == 'x' || name[1] == 'X';
            const std::string_view digits = name.substr(hex ? 2 : 1);
            const auto [ptr, ec] =
                std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
                if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = utf8::kReplacement;
                if (cp == 0xA0) cp = ' ';
                utf8::append(out, static_cast<char32_t>(cp));
                i = semi + 1;
                continue;
            }
        } else if (const auto it = named_entities().find(name); it != named_entities().end()) {
            utf8::append(out, it->second);
            i = semi + 1;
            continue;
        }
        out.push_back(text[i++]);
    }
    return out;
}

std::size_t count_words(std::string_view text) noexcept {
    std::size_t n = 0;
    bool in_word = false;
    for (const char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

std::vector<TextBlock> extract_blocks(std::string_view html) {
    std::vector<TextBlock> blocks;
    BlockBuilder builder;
    int link_depth = 0;
    std::size_t br_run = 0;
    std::size_t i = 0;

    const auto emit_text = [&](std::string_view raw) {
        if (raw.empty()) return;
        if (std::any_of(raw.begin(), raw.end(), [](char c) { return !is_space(c); })) br_run = 0;
        builder.append(decode_entities(raw), link_depth > 0);
    };

    while (i < html.size()) {
        const std::size_t lt = html.find('<', i);
        if (lt == std::string_view::npos) {
            emit_text(html.substr(i));
            break;
        }
        emit_text(html.substr(i, lt - i));
        i = lt;

        if (html.substr(i).starts_with("<!--")) {
            const std::size_t end = html.find("-->", i + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }

        const char next = i + 1 < html.size() ? html[i + 1] : '\0';
        const bool closing = next == '/';
        const std::size_t name_start = i + (closing ? 2 : 1);
        if (next == '!' || next == '?') {
            // Doctype, CDATA or processing instruction.
            const std::size_t end = html.find('>', i);
            i = end == std::string_view::npos ? html.size() : end + 1;
            continue;
        }
        if (name_start >= html.size() || !std::isalpha(static_cast<unsigned char>(html[name_start]))) {
            // Not a tag: literal '<'.
            emit_text(html.substr(i, 1));
            ++i;
            continue;
        }

        std::size_t name_end = name_start;
        while (name_end < html.size() &&
               (std::isalnum(static_cast<unsigned char>(html[name_end])) || html[name_end] == '-' ||
                html[name_end] == ':'))
            ++name_end;
        const std::string tag = lower_ascii(html.substr(name_start, name_end - name_start));

        // Skip attributes, honouring quotes.
        std::size_t j = name_end;
        char quote = 0;
        while (j < html.size()) {
            const char c = html[j];
            if (quote != 0) {
                if (c == quote) quote = 0;
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '>') {
                break;
            }
            ++j;
        }
        const bool self_closing = j > 0 && j < html.size() && html[j - 1] == '/';
        i = j < html.size() ? j + 1 : html.size();

        if (!closing && raw_discard(tag)) {
            if (self_closing) continue;
            const std::string close = "</" + tag;
            const std::size_t end = ifind(html, close, i);
            if (end == std::string_view::npos) {
                i = html.size();
            } else {
                const std::size_t gt = html.find('>', end);
                i = gt == std::string_view::npos ? html.size() : gt + 1;
            }
            continue;
        }

        if (tag == "br") {
            if (++br_run >= 2) builder.flush(blocks);
            else builder.space();
            continue;
        }
        if (tag == "a") {
            if (closing) link_depth = std::max(0, link_depth - 1);
            else if (!self_closing) ++link_depth;
            continue;
        }
        if (block_tags().contains(tag)) {
            builder.flush(blocks);
            br_run = 0;
            continue;
        }
        // Inline element: only separates words when it is a known spacer.
        if (tag == "img" || tag == "input" || tag == "button" || tag == "label") builder.space();
    }
    builder.flush(blocks);
    return blocks;
}

}  // namespace webvec::ingest
