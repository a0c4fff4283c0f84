#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::io {

/// Pull-based byte source over an istream. Gzip input (one or more
/// concatenated members) is detected by its magic bytes and inflated
/// transparently; anything else is passed through.
class ByteSource {
public:
    explicit ByteSource(std::istream& in);
    ~ByteSource();
    ByteSource(const ByteSource&) = delete;
    ByteSource& operator=(const ByteSource&) = delete;

    /// Reads up to `n` bytes; returns 0 only at end of input.
    std::size_t read(char* dst, std::size_t n);

    bool compressed() const noexcept { return gzip_; }
    /// Set when the compressed stream ended early or was corrupt.
    bool damaged() const noexcept { return damaged_; }

private:
    struct Inflater;

    std::size_t fill_raw();

    std::istream& in_;
    std::vector<char> raw_;
    std::size_t raw_pos_ = 0;
    std::size_t raw_len_ = 0;
    bool gzip_ = false;
    bool damaged_ = false;
    bool finished_ = false;
    std::unique_ptr<Inflater> inflater_;
};

/// Gzip writer. Append mode adds a new member, which keeps the file a valid
/// gzip stream.
class GzipWriter {
public:
    GzipWriter(const std::filesystem::path& path, bool append);
    ~GzipWriter();
    GzipWriter(const GzipWriter&) = delete;
    GzipWriter& operator=(const GzipWriter&) = delete;

    void write(std::string_view bytes);
    void close();

private:
    void* file_ = nullptr;
    std::filesystem::path path_;
};

/// Whole file contents, inflated when the file is gzip.
std::string read_file(const std::filesystem::path& path);

/// Lines without their terminators; a trailing LF does not produce an empty line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes text, gzip-compressed when the path ends in ".gz".
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace webvec::io
