#pragma once

#include "webvec/query/store.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace webvec::query {

struct QueryResult {
    std::string word;
    double score = 0.0;

    bool operator==(const QueryResult&) const = default;
};

using WordSet = std::unordered_set<std::string>;

/// a.b / (|a||b|) clamped to [-1, 1]. Throws UndefinedSimilarityError for a
/// zero vector and UsageError for a length mismatch.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(std::span<const float> a, std::span<const float> b);

/// Top-k vocabulary words by cosine to `query`, sorted by score descending
/// then word ascending. Words in `exclude` and zero rows are skipped.
std::vector<QueryResult> most_similar(const EmbeddingStore& store, std::span<const double> query,
                                      std::size_t k, const WordSet& exclude = {});

/// As above for a word; the word itself is always excluded.
std::vector<QueryResult> most_similar(const EmbeddingStore& store, std::string_view word, std::size_t k,
                                      const WordSet& exclude = {});

/// 3CosAdd over unit vectors: ranks x not in {a, b, c} by cos(x, b - a + c).
std::vector<QueryResult> analogy(const EmbeddingStore& store, std::string_view a, std::string_view b,
                                 std::string_view c, std::size_t k);

/// Cosine between the means of the two groups' unit vectors.
double compare_groups(const EmbeddingStore& store, std::span<const std::string> group1,
                      std::span<const std::string> group2);

/// Edit distance over code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

inline constexpr std::size_t kSpellCandidatePool = 50;

/// Spelling suggestions: the `pool` nearest words by subword-composed cosine,
/// re-ranked by edit distance to `token` (ties: cosine descending, then word).
std::vector<QueryResult> spell_suggest(const EmbeddingStore& store, std::string_view token, std::size_t k,
                                       std::size_t pool = kSpellCandidatePool);

struct EvalReport {
    std::size_t answered = 0;
    std::size_t correct = 0;
    std::size_t skipped = 0;    ///< rows with an unresolvable word
    std::size_t malformed = 0;  ///< rows without exactly four fields

    /// correct / answered, 0 when nothing was answered.
    double accuracy() const noexcept {
        return answered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(answered);
    }
};

/// Runs analogy(a, b, c, 1) per "a b c expected" row. Blank lines and lines
/// starting with ':' or '#' are section markers and ignored.
EvalReport evaluate_questions(const EmbeddingStore& store, std::string_view text);
EvalReport evaluate_questions_file(const EmbeddingStore& store, const std::filesystem::path& path);

}  // namespace webvec::query
