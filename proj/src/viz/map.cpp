#include "webvec/viz/map.hpp"

#include "webvec/error.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>

namespace webvec::viz {

std::vector<std::string> sample_words(const query::EmbeddingStore& store, std::size_t n, bool* clamped) {
    const bool over = n > store.size();
    if (over) std::clog << "warning: sample of " << n << " clamped to vocabulary size " << store.size() << '\n';
    if (clamped != nullptr) *clamped = over;
    const std::size_t take = std::min(n, store.size());
    return {store.words().begin(), store.words().begin() + static_cast<std::ptrdiff_t>(take)};
}

double effective_perplexity(double configured, std::size_t n) {
    const double bound = (static_cast<double>(n) - 1.0) / 3.0;
    return std::max(1.0, std::min(configured, bound));
}

MapResult build_map(const query::EmbeddingStore& store, std::size_t k_clusters, const ProjectionConfig& config) {
    const auto words = sample_words(store, config.sample_size);
    if (words.size() < 2) throw UsageError("map needs at least two sampled words");
    if (k_clusters == 0 || k_clusters > words.size()) throw UsageError("cluster count must lie in 1..sample size");
    if (config.iterations < 250) throw UsageError("t-SNE needs at least 250 iterations");

    Points data(words.size(), store.dim());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto u = store.unit_row(i);
        std::copy(u.begin(), u.end(), data.row(i).begin());
    }
    ProjectionConfig cfg = config;
    cfg.perplexity = effective_perplexity(config.perplexity, words.size());
    const TsneResult projection = tsne(data, cfg);
    const KMeansResult clusters = kmeans(projection.coords, k_clusters, config.seed);

    MapResult map;
    map.kl = projection.final_kl;
    map.points.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
        map.points.push_back({words[i], projection.coords.at(i, 0), projection.coords.at(i, 1), clusters.assignment[i]});
    return map;
}

std::string format_map_tsv(const MapResult& map) {
    std::string out;
    char buf[64];
    for (const auto& p : map.points) {
        out += p.word;
        for (const double v : {p.x, p.y}) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out += '\t';
            out.append(buf, ptr);
        }
        out += '\t';
        out += std::to_string(p.cluster);
        out += '\n';
    }
    return out;
}

}  // namespace webvec::viz
