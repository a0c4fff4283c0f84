#pragma once

#include "webvec/corpus/vocab.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::embed {

enum class TrainingMode {
    kSkipgramSubword,  ///< skip-gram over word + character n-gram rows
    kCbowSubword,      ///< CBOW over word + character n-gram rows
    kSkipgramWord,     ///< skip-gram over word rows only
};

/// CLI spelling: "skipgram", "cbow", "skipgram-nosub".
std::string_view mode_name(TrainingMode mode) noexcept;
TrainingMode parse_mode(std::string_view name);

struct TrainingConfig {
    std::size_t dim = 300;
    TrainingMode mode = TrainingMode::kSkipgramSubword;
    std::uint64_t min_count = 11;
    unsigned negatives = 5;
    unsigned window = 5;
    unsigned epochs = 5;
    double lr0 = 0.05;
    std::uint32_t buckets = 2'097'152;
    unsigned nmin = 3;
    unsigned nmax = 6;
    double subsample_t = 1e-4;
    unsigned threads = 8;
    std::uint64_t seed = 1;

    bool uses_subwords() const noexcept { return mode != TrainingMode::kSkipgramWord; }
    /// Bucket rows actually allocated (0 without subwords).
    std::uint32_t bucket_rows() const noexcept { return uses_subwords() ? buckets : 0; }
    /// Throws UsageError when an invariant is violated.
    void validate() const;
};

/// Dense row-major float matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<float> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const float> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::vector<float>& data() noexcept { return data_; }
    const std::vector<float>& data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<float> data_;
};

/// Input rows that make up a word's representation.
struct SubwordSet {
    std::string word;
    std::optional<std::int32_t> word_row;  ///< set for in-vocabulary words
    std::vector<std::int32_t> ngram_rows;  ///< absolute input rows, >= vocab size

    bool includes_word_row() const noexcept { return word_row.has_value(); }
    /// Word row first (if any), then the n-gram rows.
    std::vector<std::int32_t> rows() const;
};

class Model {
public:
    Model() = default;

    /// Word and bucket rows uniform in [-1/dim, 1/dim] from the config seed;
    /// output rows zero.
    static Model initialize(corpus::Vocab vocab, const TrainingConfig& config);

    const corpus::Vocab& vocab() const noexcept { return vocab_; }
    const TrainingConfig& config() const noexcept { return config_; }
    const Matrix& input() const noexcept { return input_; }
    const Matrix& output() const noexcept { return output_; }
    Matrix& input() noexcept { return input_; }
    Matrix& output() noexcept { return output_; }
    std::size_t dim() const noexcept { return config_.dim; }

    SubwordSet subwords(std::string_view word) const;

    /// Precomputed input rows of vocabulary word `id`.
    const std::vector<std::int32_t>& word_rows(std::size_t id) const { return word_rows_[id]; }

    /// Mean of the word's input rows. For out-of-vocabulary words (subword
    /// modes only) the mean of the n-gram rows. Throws UnknownWordError when
    /// no row applies.
    std::vector<float> compose_input(std::string_view word) const;

    /// Binary snapshot including bucket rows, for out-of-vocabulary queries.
    void save(const std::filesystem::path& path) const;
    static Model load(const std::filesystem::path& path);

private:
    Model(corpus::Vocab vocab, TrainingConfig config, Matrix input, Matrix output);
    void index_rows();

    corpus::Vocab vocab_;
    TrainingConfig config_;
    Matrix input_;
    Matrix output_;
    std::vector<std::vector<std::int32_t>> word_rows_;
};

/// Mean of the given rows into `out` (double accumulation, float result).
void mean_rows(const Matrix& m, std::span<const std::int32_t> rows, std::span<float> out);

}  // namespace webvec::embed
