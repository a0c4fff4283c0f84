#pragma once

#include "webvec/viz/tsne.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace webvec::viz {

struct KMeansResult {
    std::vector<std::size_t> assignment;
    Points centroids;                   ///< k x dim
    std::vector<double> inertia_trace;  ///< after every assignment step
    unsigned iterations = 0;

    double inertia() const { return inertia_trace.empty() ? 0.0 : inertia_trace.back(); }
};

/// k-means++ seeding, then Lloyd iterations until the assignment stops
/// changing or `max_iterations` is reached. Ties go to the lowest centroid
/// id; an empty cluster is moved onto the point farthest from its centroid.
/// Throws UsageError unless 1 <= k <= n.
KMeansResult kmeans(const Points& points, std::size_t k, std::uint64_t seed, unsigned max_iterations = 100);

}  // namespace webvec::viz
