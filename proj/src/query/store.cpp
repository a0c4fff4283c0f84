#include "webvec/query/store.hpp"

#include "webvec/error.hpp"

#include <cmath>

namespace webvec::query {

EmbeddingStore::EmbeddingStore(embed::WordVectors vectors, std::string mode)
    : vectors_(std::move(vectors)), mode_(std::move(mode)) {
    const std::size_t n = size();
    const std::size_t d = dim();
    if (vectors_.data.size() != n * d) throw UsageError("EmbeddingStore: data size does not match words x dim");
    unit_.assign(n * d, 0.0);
    zero_.assign(n, false);
    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(vectors_.words[i], i).second)
            throw UsageError("EmbeddingStore: duplicate word " + vectors_.words[i]);
        const auto r = row(i);
        double norm = 0.0;
        for (const float v : r) norm += static_cast<double>(v) * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            zero_[i] = true;
            continue;
        }
        for (std::size_t j = 0; j < d; ++j) unit_[i * d + j] = r[j] / norm;
    }
}

EmbeddingStore EmbeddingStore::from_model(std::shared_ptr<const embed::Model> model) {
    EmbeddingStore store(embed::word_vectors(*model), std::string(embed::mode_name(model->config().mode)));
    store.model_ = std::move(model);
    return store;
}

std::optional<std::size_t> EmbeddingStore::index(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<double> EmbeddingStore::resolve(std::string_view word) const {
    if (const auto i = index(word)) {
        const auto r = row(*i);
        return {r.begin(), r.end()};
    }
    if (model_ == nullptr || !model_->config().uses_subwords()) throw UnknownWordError(std::string(word));
    const auto composed = model_->compose_input(word);
    return {composed.begin(), composed.end()};
}

EmbeddingStore load_vectors(const std::filesystem::path& path) {
    return EmbeddingStore(embed::read_vectors(path));
}

}  // namespace webvec::query
