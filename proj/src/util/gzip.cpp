#include "webvec/util/gzip.hpp"

#include "webvec/error.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

namespace webvec::io {

struct ByteSource::Inflater {
    z_stream zs{};
    bool open = false;

    Inflater() {
        if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw IoError("inflateInit2 failed");
        open = true;
    }
    ~Inflater() {
        if (open) inflateEnd(&zs);
    }
};

namespace {
constexpr std::size_t kChunk = 1 << 16;
}

ByteSource::ByteSource(std::istream& in) : in_(in), raw_(kChunk) {
    fill_raw();
    gzip_ = raw_len_ >= 2 && static_cast<unsigned char>(raw_[0]) == 0x1f &&
            static_cast<unsigned char>(raw_[1]) == 0x8b;
    if (gzip_) inflater_ = std::make_unique<Inflater>();
}

ByteSource::~ByteSource() = default;

std::size_t ByteSource::fill_raw() {
    in_.read(raw_.data(), static_cast<std::streamsize>(raw_.size()));
    raw_len_ = static_cast<std::size_t>(in_.gcount());
    raw_pos_ = 0;
    return raw_len_;
}

std::size_t ByteSource::read(char* dst, std::size_t n) {
    if (n == 0 || finished_) return 0;
    if (!gzip_) {
        std::size_t got = 0;
        while (got < n) {
            if (raw_pos_ == raw_len_ && fill_raw() == 0) break;
            const std::size_t take = std::min(n - got, raw_len_ - raw_pos_);
            std::memcpy(dst + got, raw_.data() + raw_pos_, take);
            raw_pos_ += take;
            got += take;
        }
        if (got == 0) finished_ = true;
        return got;
    }

    z_stream& zs = inflater_->zs;
    zs.next_out = reinterpret_cast<Bytef*>(dst);
    zs.avail_out = static_cast<uInt>(n);
    while (zs.avail_out > 0) {
        if (raw_pos_ == raw_len_ && fill_raw() == 0) {
            // Input exhausted. A member that has not reached its end is truncated.
            if (zs.total_in > 0) damaged_ = true;
            finished_ = true;
            break;
        }
        zs.next_in = reinterpret_cast<Bytef*>(raw_.data() + raw_pos_);
        zs.avail_in = static_cast<uInt>(raw_len_ - raw_pos_);
        const int rc = inflate(&zs, Z_NO_FLUSH);
        raw_pos_ = raw_len_ - zs.avail_in;
        if (rc == Z_STREAM_END) {
            inflateReset(&zs);
            zs.total_in = 0;
            // Trailing bytes that are not another member end the stream.
            if (raw_pos_ == raw_len_ && fill_raw() == 0) {
                finished_ = true;
                break;
            }
            if (static_cast<unsigned char>(raw_[raw_pos_]) != 0x1f) {
                finished_ = true;
                break;
            }
        } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
            damaged_ = true;
            finished_ = true;
            break;
        }
    }
    return n - zs.avail_out;
}

GzipWriter::GzipWriter(const std::filesystem::path& path, bool append) : path_(path) {
    file_ = gzopen(path.c_str(), append ? "ab" : "wb");
    if (file_ == nullptr) throw IoError("cannot open for writing: " + path.string());
}

GzipWriter::~GzipWriter() {
    try {
        close();
    } catch (...) {
    }
}

void GzipWriter::write(std::string_view bytes) {
    if (file_ == nullptr) throw IoError("write after close: " + path_.string());
    while (!bytes.empty()) {
        const auto take = static_cast<unsigned>(std::min<std::size_t>(bytes.size(), 1u << 30));
        if (gzwrite(static_cast<gzFile>(file_), bytes.data(), take) != static_cast<int>(take))
            throw IoError("write failed: " + path_.string());
        bytes.remove_prefix(take);
    }
}

void GzipWriter::close() {
    if (file_ == nullptr) return;
    const int rc = gzclose(static_cast<gzFile>(file_));
    file_ = nullptr;
    if (rc != Z_OK) throw IoError("close failed: " + path_.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    ByteSource src(in);
    std::string out;
    std::vector<char> buf(kChunk);
    while (const std::size_t got = src.read(buf.data(), buf.size())) out.append(buf.data(), got);
    if (src.damaged()) throw IoError("corrupt gzip stream: " + path.string());
    return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = end + 1;
    }
    return lines;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.extension() == ".gz") {
        GzipWriter w(path, false);
        w.write(text);
        w.close();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace webvec::io
