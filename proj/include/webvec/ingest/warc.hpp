#pragma once

#include "webvec/util/gzip.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::ingest {

/// One HTML capture pulled out of a WARC "response" record.
struct RawDocument {
    std::string url;
    std::string domain;
    std::string body;  ///< HTTP entity body, transfer/content coding removed
    std::optional<std::string> declared_charset;
};

/// Per-stream record accounting: records == documents + skipped + errors.
struct WarcStats {
    std::size_t records = 0;
    std::size_t documents = 0;
    std::size_t skipped = 0;
    std::size_t errors = 0;
};

/// Streaming WARC/1.0 and WARC/1.1 reader. Per-record gzip is handled by
/// the underlying byte source. Bad records are counted and skipped; the
/// stream is never aborted.
class WarcReader {
public:
    explicit WarcReader(std::istream& in);

    /// The next HTML response document, or nullopt at end of stream.
    std::optional<RawDocument> next();

    const WarcStats& stats() const noexcept { return stats_; }

private:
    enum class Fetch { kOk, kEof };

    bool fill();
    Fetch read_line(std::string& line);
    bool read_exact(std::size_t n, std::string& out);
    void resync();

    io::ByteSource src_;
    std::string buf_;
    std::size_t pos_ = 0;
    bool eof_ = false;
    std::optional<std::string> pending_version_;
    WarcStats stats_;
};

/// Reads every document of a stream.
std::vector<RawDocument> read_warc(std::istream& in, WarcStats* stats = nullptr);

/// Lowercased host of an absolute URL (userinfo and port removed).
/// Returns an empty string when no host can be found.
std::string domain_of(std::string_view url);

/// Charset named by a Content-Type value ("text/html; charset=...").
std::optional<std::string> charset_from_content_type(std::string_view content_type);

/// Charset from a <meta charset> or <meta http-equiv> tag near the top of the page.
std::optional<std::string> charset_from_meta(std::string_view html);

}  // namespace webvec::ingest
