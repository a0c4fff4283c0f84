#pragma once

#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

namespace webvec::ingest {

/// Filename stem for a domain: path separators, ':' and control characters
/// become '_'; "." and ".." are prefixed with '_'.
std::string safe_domain_name(std::string_view domain);

/// Appends sentences, one per line, to "<out_dir>/<safe domain>.txt.gz" and
/// returns that path. An empty span still leaves a valid gzip file.
/// Throws IoError naming the path when the file cannot be written.
std::filesystem::path write_domain_corpus(std::string_view domain,
                                          std::span<const std::string> sentences,
                                          const std::filesystem::path& out_dir);

/// Serializes writers per domain so concurrent workers never interleave
/// members of the same file.
class DomainCorpusSink {
public:
    explicit DomainCorpusSink(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {}

    std::filesystem::path append(std::string_view domain, std::span<const std::string> sentences);

    const std::filesystem::path& out_dir() const noexcept { return out_dir_; }

private:
    std::mutex& lock_for(const std::string& domain);

    std::filesystem::path out_dir_;
    std::mutex map_mutex_;
    std::unordered_map<std::string, std::mutex> locks_;
};

}  // namespace webvec::ingest
