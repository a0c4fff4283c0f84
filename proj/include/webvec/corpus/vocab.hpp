#pragma once

#include "webvec/corpus/ngrams.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace webvec::corpus {

struct VocabEntry {
    std::string word;
    std::uint64_t count = 0;

    bool operator==(const VocabEntry&) const = default;
};

/// Frequency-ranked word table. Ids are positions: count descending, then
/// word ascending by code point.
class Vocab {
public:
    Vocab() = default;
    /// `entries` must already be in vocab order with unique words.
    Vocab(std::vector<VocabEntry> entries, std::uint64_t min_count);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const VocabEntry& operator[](std::size_t id) const { return entries_[id]; }
    const std::vector<VocabEntry>& entries() const noexcept { return entries_; }
    std::uint64_t min_count() const noexcept { return min_count_; }
    std::uint64_t total_count() const noexcept { return total_; }

    std::optional<std::int32_t> id(std::string_view word) const;

    bool operator==(const Vocab& other) const {
        return entries_ == other.entries_ && min_count_ == other.min_count_;
    }

private:
    std::vector<VocabEntry> entries_;
    std::uint64_t min_count_ = 0;
    std::uint64_t total_ = 0;
    std::unordered_map<std::string, std::int32_t> index_;
};

/// Words with count >= min_count. Throws UsageError for a table with n != 1.
Vocab build_vocab(const NgramTable& unigrams, std::uint64_t min_count);

/// TSV "word<TAB>count" in id order (same grammar as the n-gram TSV).
void write_vocab(const Vocab& vocab, const std::filesystem::path& out);
Vocab read_vocab(const std::filesystem::path& path, std::uint64_t min_count = 0);

}  // namespace webvec::corpus
