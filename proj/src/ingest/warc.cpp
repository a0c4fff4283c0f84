#include "webvec/ingest/warc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>

namespace webvec::ingest {

namespace {

constexpr std::size_t kReadChunk = 1 << 16;
constexpr std::size_t kMetaScanBytes = 4096;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_warc_version(std::string_view line) {
    return line == "WARC/1.0" || line == "WARC/1.1";
}

using HeaderMap = std::unordered_map<std::string, std::string>;

// Parses "Name: value" lines; returns false if any line lacks a colon.
bool parse_headers(const std::vector<std::string>& lines, HeaderMap& out) {
    bool ok = true;
    for (const auto& line : lines) {
        const auto colon = line.find(':');
        if (colon == std::string::npos || colon == 0) {
            ok = false;
            continue;
        }
        out[lower(trim(std::string_view(line).substr(0, colon)))] =
            std::string(trim(std::string_view(line).substr(colon + 1)));
    }
    return ok;
}

std::optional<std::size_t> parse_size(std::string_view s) {
    s = trim(s);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

bool is_html_type(std::string_view content_type) {
    const std::string t = lower(content_type);
    return t.find("text/html") != std::string::npos ||
           t.find("application/xhtml") != std::string::npos;
}

std::optional<std::string> dechunk(std::string_view body) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const auto eol = body.find('\n', pos);
        if (eol == std::string_view::npos) return std::nullopt;
        std::string_view size_line = trim(body.substr(pos, eol - pos));
        if (const auto semi = size_line.find(';'); semi != std::string_view::npos)
            size_line = trim(size_line.substr(0, semi));
        std::size_t size = 0;
        const auto [ptr, ec] =
            std::from_chars(size_line.data(), size_line.data() + size_line.size(), size, 16);
        if (ec != std::errc() || size_line.empty()) return std::nullopt;
        pos = eol + 1;
        if (size == 0) return out;
        if (pos + size > body.size()) return std::nullopt;
        out.append(body.substr(pos, size));
        pos += size;
        if (pos < body.size() && body[pos] == '\r') ++pos;
        if (pos < body.size() && body[pos] == '\n') ++pos;
    }
}

std::optional<std::string> gunzip(std::string_view body) {
    std::istringstream in{std::string(body)};
    io::ByteSource src(in);
    if (!src.compressed()) return std::nullopt;
    std::string out;
    char buf[kReadChunk];
    while (const std::size_t got = src.read(buf, sizeof buf)) out.append(buf, got);
    if (src.damaged()) return std::nullopt;
    return out;
}

}  // namespace

WarcReader::WarcReader(std::istream& in) : src_(in) {}

bool WarcReader::fill() {
    if (eof_) return false;
    if (pos_ > 0 && pos_ >= buf_.size() / 2) {
        buf_.erase(0, pos_);
        pos_ = 0;
    }
    const std::size_t old = buf_.size();
    buf_.resize(old + kReadChunk);
    const std::size_t got = src_.read(buf_.data() + old, kReadChunk);
    buf_.resize(old + got);
    if (got == 0) eof_ = true;
    return got > 0;
}

WarcReader::Fetch WarcReader::read_line(std::string& line) {
    std::size_t scanned = 0;  // bytes after pos_ known to hold no newline
    while (true) {
        const auto nl = buf_.find('\n', pos_ + scanned);
        if (nl != std::string::npos) {
            line.assign(buf_, pos_, nl - pos_);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            pos_ = nl + 1;
            return Fetch::kOk;
        }
        scanned = buf_.size() - pos_;
        if (!fill()) {
            if (pos_ < buf_.size()) {
                line.assign(buf_, pos_, std::string::npos);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                pos_ = buf_.size();
                return Fetch::kOk;
            }
            return Fetch::kEof;
        }
    }
}

bool WarcReader::read_exact(std::size_t n, std::string& out) {
    while (buf_.size() - pos_ < n) {
        if (!fill()) return false;
    }
    out.assign(buf_, pos_, n);
    pos_ += n;
    return true;
}

void WarcReader::resync() {
    std::string line;
    while (read_line(line) == Fetch::kOk) {
        if (is_warc_version(line)) {
            pending_version_ = line;
            return;
        }
    }
}

std::optional<RawDocument> WarcReader::next() {
    std::string line;
    while (true) {
        if (pending_version_) {
            line = *pending_version_;
            pending_version_.reset();
        } else {
            do {
                if (read_line(line) == Fetch::kEof) return std::nullopt;
            } while (line.empty());
        }

        ++stats_.records;
        if (!is_warc_version(line)) {
            ++stats_.errors;
            resync();
            continue;
        }

        std::vector<std::string> header_lines;
        bool header_done = false;
        while (read_line(line) == Fetch::kOk) {
            if (line.empty()) {
                header_done = true;
                break;
            }
            if (is_warc_version(line)) {
                // A new record started before this header ended.
                pending_version_ = line;
                break;
            }
            header_lines.push_back(line);
        }
        if (!header_done) {
            ++stats_.errors;
            continue;
        }

        HeaderMap warc;
        const bool header_ok = parse_headers(header_lines, warc);
        const auto length_it = warc.find("content-length");
        const auto length =
            length_it == warc.end() ? std::nullopt : parse_size(length_it->second);
        if (!length) {
            ++stats_.errors;
            resync();
            continue;
        }

        std::string block;
        if (!read_exact(*length, block)) {
            // Truncated final record.
            ++stats_.errors;
            pos_ = buf_.size();
            return std::nullopt;
        }

        if (!header_ok) {
            ++stats_.errors;
            continue;
        }

        const auto type_it = warc.find("warc-type");
        if (type_it == warc.end()) {
            ++stats_.errors;
            continue;
        }
        if (type_it->second != "response") {
            ++stats_.skipped;
            continue;
        }

        std::string url;
        if (const auto it = warc.find("warc-target-uri"); it != warc.end()) url = it->second;
        if (url.size() >= 2 && url.front() == '<' && url.back() == '>')
            url = url.substr(1, url.size() - 2);
        const std::string domain = domain_of(url);
        if (url.empty() || domain.empty()) {
            ++stats_.errors;
            continue;
        }

        // Payload: HTTP status line, headers, blank line, entity body.
        std::string_view payload(block);
        std::size_t header_end = payload.find("\r\n\r\n");
        std::size_t sep = 4;
        if (header_end == std::string_view::npos) {
            header_end = payload.find("\n\n");
            sep = 2;
        }
        if (!payload.starts_with("HTTP/") || header_end == std::string_view::npos) {
            ++stats_.errors;
            continue;
        }

        std::vector<std::string> http_lines;
        {
            std::string_view head = payload.substr(0, header_end);
            std::size_t p = head.find('\n');
            while (p != std::string_view::npos && p + 1 <= head.size()) {
                const std::size_t q = head.find('\n', p + 1);
                std::string_view l =
                    head.substr(p + 1, (q == std::string_view::npos ? head.size() : q) - p - 1);
                if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
                if (!l.empty()) http_lines.emplace_back(l);
                p = q;
            }
        }
        HeaderMap http;
        parse_headers(http_lines, http);

        const auto ct = http.find("content-type");
        std::string body(payload.substr(header_end + sep));
        if (ct == http.end() || !is_html_type(ct->second)) {
            ++stats_.skipped;
            continue;
        }

        if (const auto te = http.find("transfer-encoding");
            te != http.end() && lower(te->second).find("chunked") != std::string::npos) {
            if (auto decoded = dechunk(body)) body = std::move(*decoded);
        }
        if (const auto ce = http.find("content-encoding"); ce != http.end()) {
            const std::string coding = lower(ce->second);
            if (coding.find("gzip") != std::string::npos) {
                auto inflated = gunzip(body);
                if (!inflated) {
                    ++stats_.errors;
                    continue;
                }
                body = std::move(*inflated);
            }
        }

        RawDocument doc;
        doc.url = std::move(url);
        doc.domain = domain;
        doc.declared_charset = charset_from_content_type(ct->second);
        if (!doc.declared_charset) doc.declared_charset = charset_from_meta(body);
        doc.body = std::move(body);
        ++stats_.documents;
        return doc;
    }
}

std::vector<RawDocument> read_warc(std::istream& in, WarcStats* stats) {
    WarcReader reader(in);
    std::vector<RawDocument> docs;
    while (auto doc = reader.next()) docs.push_back(std::move(*doc));
    if (stats != nullptr) *stats = reader.stats();
    return docs;
}

std::string domain_of(std::string_view url) {
    std::string_view rest = url;
    if (const auto scheme = rest.find("://"); scheme != std::string_view::npos)
        rest.remove_prefix(scheme + 3);
    else if (rest.starts_with("//"))
        rest.remove_prefix(2);
    else
        return {};
    const auto end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, end);
    if (const auto at = authority.rfind('@'); at != std::string_view::npos)
        authority.remove_prefix(at + 1);
    if (authority.starts_with("[")) {
        const auto close = authority.find(']');
        return close == std::string_view::npos ? std::string{} : lower(authority.substr(0, close + 1));
    }
    if (const auto colon = authority.find(':'); colon != std::string_view::npos)
        authority = authority.substr(0, colon);
    while (authority.ends_with(".")) authority.remove_suffix(1);
    return lower(authority);
}

std::optional<std::string> charset_from_content_type(std::string_view content_type) {
    const std::string lowered = lower(content_type);
    const auto at = lowered.find("charset");
    if (at == std::string::npos) return std::nullopt;
    std::size_t p = at + 7;
    while (p < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[p]))) ++p;
    if (p >= lowered.size() || lowered[p] != '=') return std::nullopt;
    ++p;
    while (p < lowered.size() &&
           (std::isspace(static_cast<unsigned char>(lowered[p])) || lowered[p] == '"' || lowered[p] == '\''))
        ++p;
    std::size_t q = p;
    while (q < lowered.size() && lowered[q] != '"' && lowered[q] != '\'' && lowered[q] != ';' &&
           lowered[q] != '>' && lowered[q] != '/' &&
           !std::isspace(static_cast<unsigned char>(lowered[q])))
        ++q;
    if (q == p) return std::nullopt;
    return lowered.substr(p, q - p);
}

std::optional<std::string> charset_from_meta(std::string_view html) {
    const std::string head = lower(html.substr(0, std::min(html.size(), kMetaScanBytes)));
    std::size_t pos = 0;
    while ((pos = head.find("<meta", pos)) != std::string::npos) {
        const auto close = head.find('>', pos);
        const std::string_view tag(head.data() + pos,
                                   (close == std::string::npos ? head.size() : close) - pos);
        if (auto cs = charset_from_content_type(tag)) return cs;
        pos += 5;
    }
    return std::nullopt;
}

}  // namespace webvec::ingest
