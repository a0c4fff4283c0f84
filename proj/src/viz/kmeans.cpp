#include "webvec/viz/kmeans.hpp"

#include "webvec/error.hpp"

#include <limits>
#include <random>

namespace webvec::viz {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Points seed_plus_plus(const Points& points, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = points.n;
    Points centroids(k, points.dim);
    std::vector<bool> chosen(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());

    std::size_t pick = static_cast<std::size_t>(rng() % n);
    for (std::size_t c = 0; c < k; ++c) {
        if (c > 0) {
            double total = 0.0;
            for (const double d : best) total += d;
            if (total > 0.0) {
                const double r = uniform(rng) * total;
                double cumulative = 0.0;
                pick = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    cumulative += best[i];
                    if (cumulative > r) {
                        pick = i;
                        break;
                    }
                }
            } else {
                // Every point coincides with a centroid: take unused indices in order.
                std::size_t skip = static_cast<std::size_t>(rng() % n);
                pick = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t idx = (skip + i) % n;
                    if (!chosen[idx]) {
                        pick = idx;
                        break;
                    }
                }
            }
        }
        chosen[pick] = true;
        auto dst = centroids.row(c);
        const auto src = points.row(pick);
        std::copy(src.begin(), src.end(), dst.begin());
        for (std::size_t i = 0; i < n; ++i) best[i] = std::min(best[i], sq_dist(points.row(i), dst));
    }
    return centroids;
}

// Nearest centroid per point (lowest id on ties); returns the inertia.
double assign(const Points& points, const Points& centroids, std::vector<std::size_t>& out) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.n; ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.n; ++c) {
            const double d = sq_dist(points.row(i), centroids.row(c));
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        out[i] = best;
        inertia += best_d;
    }
    return inertia;
}

}  // namespace

KMeansResult kmeans(const Points& points, std::size_t k, std::uint64_t seed, unsigned max_iterations) {
    if (k == 0 || k > points.n) throw UsageError("k-means needs 1 <= k <= n");
    std::mt19937_64 rng(seed);
    KMeansResult result;
    result.centroids = seed_plus_plus(points, k, rng);
    result.assignment.assign(points.n, 0);
    std::vector<std::size_t> previous;

    bool converged = false;
    for (unsigned iter = 0; iter < max_iterations; ++iter) {
        result.inertia_trace.push_back(assign(points, result.centroids, result.assignment));
        result.iterations = iter + 1;
        if (result.assignment == previous) {
            converged = true;
            break;
        }
        previous = result.assignment;

        Points sums(k, points.dim);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < points.n; ++i) {
            const std::size_t c = result.assignment[i];
            ++counts[c];
            for (std::size_t j = 0; j < points.dim; ++j) sums.at(c, j) += points.at(i, j);
        }
        std::vector<bool> taken(points.n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < points.dim; ++j)
                    result.centroids.at(c, j) = sums.at(c, j) / static_cast<double>(counts[c]);
                continue;
            }
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.n; ++i) {
                if (taken[i]) continue;
                const double d = sq_dist(points.row(i), result.centroids.row(result.assignment[i]));
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            taken[far] = true;
            for (std::size_t j = 0; j < points.dim; ++j) result.centroids.at(c, j) = points.at(far, j);
        }
    }
    if (!converged) {
        // Leave every point on its nearest centroid.
        const double inertia = assign(points, result.centroids, result.assignment);
        result.inertia_trace.push_back(inertia);
    }
    return result;
}

}  // namespace webvec::viz
