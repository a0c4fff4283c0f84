#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace webvec::corpus {

struct DedupStats {
    std::uint64_t total_sentences = 0;
    std::uint64_t unique_sentences = 0;
    std::uint64_t total_bytes = 0;   ///< including one LF per sentence
    std::uint64_t unique_bytes = 0;

    /// 1 - unique/total, or 0 for an empty input.
    double reduction_ratio() const noexcept;
    double byte_reduction_ratio() const noexcept;
};

struct Digest128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;
    bool operator==(const Digest128&) const = default;
};

Digest128 digest128(std::string_view s) noexcept;

/// Exact first-occurrence deduplication. Sentences are keyed by a 128-bit
/// digest; a digest hit is confirmed against the stored first occurrence.
class SentenceDeduper {
public:
    /// True if `sentence` has not been seen before.
    bool insert(std::string_view sentence);

    const DedupStats& stats() const noexcept { return stats_; }
    void reset_stats() noexcept { stats_ = {}; }
    void clear();

private:
    struct DigestHash {
        std::size_t operator()(const Digest128& d) const noexcept { return d.lo ^ (d.hi * 31); }
    };

    std::unordered_map<Digest128, std::string, DigestHash> seen_;
    std::unordered_set<std::string> collided_;
    DedupStats stats_;
};

/// Distinct lines in first-occurrence order.
std::vector<std::string> dedup_sentences(std::span<const std::string> lines, DedupStats* stats = nullptr);

struct CorpusDedupReport {
    DedupStats per_domain;  ///< stage one, summed over domain files
    DedupStats global;      ///< stage two, over the stage-one output
    DedupStats overall;     ///< raw input against final output
};

/// Two-stage deduplication of a directory of per-domain corpus files
/// ("*.txt" or "*.txt.gz", processed in sorted order): first within each
/// file, then across all of them. Writes the survivors to `out_file`
/// (gzip when it ends in ".gz").
CorpusDedupReport dedup_corpus_dir(const std::filesystem::path& in_dir,
                                   const std::filesystem::path& out_file);

}  // namespace webvec::corpus
