#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace webvec::viz {

/// Row-major dense point set.
struct Points {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> values;

    Points() = default;
    Points(std::size_t rows, std::size_t cols) : n(rows), dim(cols), values(rows * cols, 0.0) {}

    std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
    double& at(std::size_t i, std::size_t j) { return values[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }

    bool operator==(const Points&) const = default;
};

struct ProjectionConfig {
    std::size_t sample_size = 500;
    double perplexity = 30.0;
    unsigned iterations = 1000;
    double early_exaggeration = 12.0;
    unsigned exaggeration_iterations = 250;
    double learning_rate = 200.0;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    unsigned momentum_switch = 250;
    std::uint64_t seed = 0;
};

/// Pairwise squared Euclidean distances, n x n row-major.
std::vector<double> squared_distances(const Points& points);

struct Calibration {
    std::vector<double> sigma;         ///< per-point Gaussian bandwidth
    std::vector<double> conditional;   ///< p_{j|i}, n x n row-major, zero diagonal
    std::vector<double> entropy_bits;  ///< achieved Shannon entropy per row
    std::vector<bool> degenerate;      ///< every off-diagonal distance was zero
};

/// Per-row binary search on the Gaussian precision so that the entropy of
/// p_{j|i} equals log2(perplexity); at most 50 steps or |dH| < 1e-5.
/// `sq_dist` holds squared distances (symmetric, zero diagonal).
Calibration perplexity_calibration(std::span<const double> sq_dist, std::size_t n, double perplexity);

/// Symmetrized joint affinities p_ij = (p_{j|i} + p_{i|j}) / 2n.
std::vector<double> joint_affinities(const Calibration& cal, std::size_t n);

/// KL(P || Q) for a 2-D embedding under the Student-t kernel.
double kl_divergence(std::span<const double> P, const Points& Y);

/// Gradient of KL(P || Q) with respect to every coordinate of Y.
Points kl_gradient(std::span<const double> P, const Points& Y);

struct TsneResult {
    Points coords;                                    ///< n x 2
    std::vector<std::pair<unsigned, double>> kl_trace;  ///< (iteration, KL), first entry before any step
    double final_kl = 0.0;
    double post_exaggeration_kl = 0.0;  ///< after the first step with unscaled affinities
};

/// Exact O(n^2) t-SNE initialized from the first two principal components
/// scaled to standard deviation 1e-4. Deterministic for a given input.
/// Throws UsageError for n < 2, non-finite input or perplexity outside (0, n-1].
TsneResult tsne(const Points& data, const ProjectionConfig& config);

/// Step size actually used: the configured rate, capped at n / (4 * exaggeration).
/// Larger steps make the exaggerated phase grow the layout geometrically for
/// small n, which tears duplicate points apart.
double effective_learning_rate(double configured, std::size_t n, double early_exaggeration);

/// First two principal component scores, each column scaled to `stddev`.
Points pca_init(const Points& data, double stddev);

}  // namespace webvec::viz
