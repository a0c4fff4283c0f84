#include "webvec/corpus/vocab.hpp"

#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"

#include <algorithm>

namespace webvec::corpus {

Vocab::Vocab(std::vector<VocabEntry> entries, std::uint64_t min_count)
    : entries_(std::move(entries)), min_count_(min_count) {
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!index_.emplace(entries_[i].word, static_cast<std::int32_t>(i)).second)
            throw UsageError("duplicate vocabulary word: " + entries_[i].word);
        total_ += entries_[i].count;
    }
}

std::optional<std::int32_t> Vocab::id(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocab build_vocab(const NgramTable& unigrams, std::uint64_t min_count) {
    if (unigrams.n != 1) throw UsageError("build_vocab needs a unigram table");
    std::vector<VocabEntry> entries;
    for (const auto& [word, count] : unigrams.counts) {
        if (count >= min_count) entries.push_back({word, count});
    }
    // UTF-8 byte order equals code point order.
    std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.word < b.word;
    });
    return Vocab(std::move(entries), min_count);
}

void write_vocab(const Vocab& vocab, const std::filesystem::path& out) {
    std::string text;
    for (const auto& e : vocab.entries()) {
        text += e.word;
        text += '\t';
        text += std::to_string(e.count);
        text += '\n';
    }
    io::write_text(out, text);
}

Vocab read_vocab(const std::filesystem::path& path, std::uint64_t min_count) {
    const NgramTable table = read_ngrams(path);
    if (table.n != 1) throw FormatError(path.string(), 1, "vocabulary rows must be single words");
    return build_vocab(table, min_count);
}

}  // namespace webvec::corpus
