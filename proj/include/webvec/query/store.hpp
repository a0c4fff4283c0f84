#pragma once

#include "webvec/embed/model.hpp"
#include "webvec/embed/vectors_io.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace webvec::query {

/// Immutable word-vector table with a row-normalized copy. Zero rows keep a
/// zero unit row and are never returned by ranking queries.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(embed::WordVectors vectors, std::string mode = "vectors");

    /// Store over a trained model's composed word vectors, with the model
    /// attached for out-of-vocabulary composition.
    static EmbeddingStore from_model(std::shared_ptr<const embed::Model> model);

    std::size_t size() const noexcept { return vectors_.words.size(); }
    std::size_t dim() const noexcept { return vectors_.dim; }
    const std::string& mode() const noexcept { return mode_; }
    const std::vector<std::string>& words() const noexcept { return vectors_.words; }
    const std::string& word(std::size_t i) const { return vectors_.words[i]; }
    const embed::WordVectors& vectors() const noexcept { return vectors_; }

    std::optional<std::size_t> index(std::string_view word) const;
    std::span<const float> row(std::size_t i) const { return vectors_.row(i); }
    std::span<const double> unit_row(std::size_t i) const { return {unit_.data() + i * dim(), dim()}; }
    bool is_zero(std::size_t i) const { return zero_[i]; }

    bool has_subwords() const noexcept { return model_ != nullptr; }
    const embed::Model* model() const noexcept { return model_.get(); }

    /// Raw vector of a word: stored row if present, else composed from
    /// subwords. Throws UnknownWordError otherwise.
    std::vector<double> resolve(std::string_view word) const;

private:
    embed::WordVectors vectors_;
    std::vector<double> unit_;
    std::vector<bool> zero_;
    std::unordered_map<std::string, std::size_t> index_;
    std::shared_ptr<const embed::Model> model_;
    std::string mode_;
};

/// Loads the text vector format.
EmbeddingStore load_vectors(const std::filesystem::path& path);

}  // namespace webvec::query
