#pragma once

#include "webvec/query/store.hpp"
#include "webvec/viz/kmeans.hpp"
#include "webvec/viz/tsne.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace webvec::viz {

struct ProjectedPoint {
    std::string word;
    double x = 0.0;
    double y = 0.0;
    std::size_t cluster = 0;

    bool operator==(const ProjectedPoint&) const = default;
};

struct MapResult {
    std::vector<ProjectedPoint> points;
    double kl = 0.0;

    bool operator==(const MapResult&) const = default;
};

inline constexpr std::size_t kDefaultClusters = 10;

/// The n most frequent words (the store is in vocabulary order). A request
/// beyond the vocabulary is clamped and reported through `clamped`.
std::vector<std::string> sample_words(const query::EmbeddingStore& store, std::size_t n,
                                      bool* clamped = nullptr);

/// Perplexity actually used for n points: the configured value, lowered
/// below n/3 when needed (never below 1).
double effective_perplexity(double configured, std::size_t n);

/// Sample, project the unit vectors with t-SNE, cluster the projection.
MapResult build_map(const query::EmbeddingStore& store, std::size_t k_clusters, const ProjectionConfig& config);

/// "word<TAB>x<TAB>y<TAB>cluster" rows.
std::string format_map_tsv(const MapResult& map);

}  // namespace webvec::viz
