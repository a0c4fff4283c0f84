#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace webvec::corpus {

using Sentence = std::vector<std::string>;

/// Whitespace tokenization.
Sentence tokenize(std::string_view line);

struct NgramTable {
    unsigned n = 1;
    std::unordered_map<std::string, std::uint64_t> counts;  ///< key: tokens joined by ' '

    bool operator==(const NgramTable&) const = default;
};

/// Adds `from` into `into`. Associative and commutative.
void merge(NgramTable& into, const NgramTable& from);

/// Counts contiguous n-grams inside each sentence (never across sentences).
/// Throws UsageError unless n is 1, 2 or 3.
NgramTable count_ngrams(std::span<const Sentence> sentences, unsigned n);

/// Same result as count_ngrams, counted on `threads` workers into
/// hash-sharded maps that are merged at the end.
NgramTable count_ngrams_parallel(std::span<const Sentence> sentences, unsigned n, unsigned threads);

/// Counts n-grams of a one-sentence-per-line text file (gzip allowed).
NgramTable count_ngrams_file(const std::filesystem::path& corpus, unsigned n, unsigned threads = 1);

/// Rows sorted by count descending, then key ascending (byte order).
std::vector<std::pair<std::string, std::uint64_t>> sorted_rows(const NgramTable& table);

/// TSV "ngram<TAB>count<LF>" in sorted_rows order.
std::string format_ngrams(const NgramTable& table);
void write_ngrams(const NgramTable& table, const std::filesystem::path& out);

/// Parses the TSV form. n is taken from the first row (1 for an empty
/// file); every row must agree. Throws FormatError with the line number.
NgramTable parse_ngrams(std::string_view text, const std::string& source = "<string>");
NgramTable read_ngrams(const std::filesystem::path& path);

}  // namespace webvec::corpus
