#include "webvec/ingest/corpus_writer.hpp"

#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"

namespace webvec::ingest {

std::string safe_domain_name(std::string_view domain) {
    std::string out;
    out.reserve(domain.size());
    for (const char c : domain) {
        const auto b = static_cast<unsigned char>(c);
        out.push_back((c == '/' || c == '\\' || c == ':' || b < 0x20 || b == 0x7F) ? '_' : c);
    }
    if (out == "." || out == "..") out.insert(out.begin(), '_');
    return out;
}

std::filesystem::path write_domain_corpus(std::string_view domain,
                                          std::span<const std::string> sentences,
                                          const std::filesystem::path& out_dir) {
    if (domain.empty()) throw UsageError("write_domain_corpus: empty domain");
    const auto path = out_dir / (safe_domain_name(domain) + ".txt.gz");
    std::string text;
    for (const auto& s : sentences) {
        text += s;
        text += '\n';
    }
    try {
        io::GzipWriter writer(path, /*append=*/true);
        writer.write(text);
        writer.close();
    } catch (const IoError&) {
        throw IoError("cannot write corpus file: " + path.string());
    }
    return path;
}

std::mutex& DomainCorpusSink::lock_for(const std::string& domain) {
    std::lock_guard guard(map_mutex_);
    return locks_[domain];
}

std::filesystem::path DomainCorpusSink::append(std::string_view domain,
                                               std::span<const std::string> sentences) {
    std::lock_guard guard(lock_for(std::string(domain)));
    return write_domain_corpus(domain, sentences, out_dir_);
}

}  // namespace webvec::ingest
