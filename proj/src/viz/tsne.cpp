#include "webvec/viz/tsne.hpp"

#include "webvec/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace webvec::viz {

namespace {

constexpr int kCalibrationSteps = 50;
constexpr double kEntropyTolerance = 1e-5;
constexpr unsigned kTraceEvery = 50;
constexpr double kMinGain = 0.01;

}  // namespace

std::vector<double> squared_distances(const Points& points) {
    const std::size_t n = points.n;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < points.dim; ++k) {
                const double diff = points.at(i, k) - points.at(j, k);
                s += diff * diff;
            }
            d[i * n + j] = d[j * n + i] = s;
        }
    }
    return d;
}

Calibration perplexity_calibration(std::span<const double> sq_dist, std::size_t n, double perplexity) {
    if (sq_dist.size() != n * n) throw UsageError("perplexity_calibration: distance matrix is not n x n");
    if (!(perplexity > 0.0)) throw UsageError("perplexity must be positive");
    const double target = std::log2(perplexity);

    Calibration cal;
    cal.sigma.assign(n, 0.0);
    cal.conditional.assign(n * n, 0.0);
    cal.entropy_bits.assign(n, 0.0);
    cal.degenerate.assign(n, false);
    if (n < 2) return cal;

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = sq_dist.subspan(i * n, n);
        double dmin = std::numeric_limits<double>::infinity();
        double dmax = 0.0;
        double dsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dmin = std::min(dmin, row[j]);
            dmax = std::max(dmax, row[j]);
            dsum += row[j];
        }
        if (dmax == 0.0) {
            cal.degenerate[i] = true;
            for (std::size_t j = 0; j < n; ++j)
                cal.conditional[i * n + j] = j == i ? 0.0 : 1.0 / static_cast<double>(n - 1);
            cal.sigma[i] = std::numeric_limits<double>::infinity();
            cal.entropy_bits[i] = std::log2(static_cast<double>(n - 1));
            continue;
        }

        // Entropy in bits of p_{j|i} at precision beta; fills p.
        const auto evaluate = [&](double beta) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = j == i ? 0.0 : std::exp(-beta * (row[j] - dmin));
                sum += p[j];
            }
            double weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                p[j] /= sum;
                weighted += p[j] * (row[j] - dmin);
            }
            return (std::log(sum) + beta * weighted) / std::numbers::ln2;
        };

        // No bandwidth exceeds the uniform entropy; take the uniform limit directly.
        if (target >= std::log2(static_cast<double>(n - 1))) {
            for (std::size_t j = 0; j < n; ++j)
                cal.conditional[i * n + j] = j == i ? 0.0 : 1.0 / static_cast<double>(n - 1);
            cal.sigma[i] = std::numeric_limits<double>::infinity();
            cal.entropy_bits[i] = std::log2(static_cast<double>(n - 1));
            continue;
        }

        const double spread = dsum / static_cast<double>(n - 1) - dmin;
        double beta = spread > 0.0 ? 1.0 / spread : 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = evaluate(beta);
        for (int step = 0; step < kCalibrationSteps && std::abs(entropy - target) >= kEntropyTolerance; ++step) {
            if (entropy > target) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (lo + hi);
            } else {
                hi = beta;
                beta = 0.5 * (lo + hi);
            }
            entropy = evaluate(beta);
        }
        for (std::size_t j = 0; j < n; ++j) cal.conditional[i * n + j] = p[j];
        cal.entropy_bits[i] = entropy;
        cal.sigma[i] = std::sqrt(1.0 / (2.0 * beta));
    }
    return cal;
}

std::vector<double> joint_affinities(const Calibration& cal, std::size_t n) {
    std::vector<double> P(n * n, 0.0);
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) P[i * n + j] = (cal.conditional[i * n + j] + cal.conditional[j * n + i]) * scale;
        }
    }
    return P;
}

double kl_divergence(std::span<const double> P, const Points& Y) {
    const std::size_t n = Y.n;
    const auto d = squared_distances(Y);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) z += 1.0 / (1.0 + d[i * n + j]);
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double p = P[i * n + j];
            if (i == j || p <= 0.0) continue;
            const double q = std::max(1.0 / (1.0 + d[i * n + j]) / z, std::numeric_limits<double>::min());
            kl += p * std::log(p / q);
        }
    }
    return kl;
}

namespace {

// Gradient with the affinities scaled by `exaggeration`.
void gradient_into(std::span<const double> P, const Points& Y, double exaggeration, Points& grad,
                   std::vector<double>& w) {
    const std::size_t n = Y.n;
    w.assign(n * n, 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < Y.dim; ++k) {
                const double diff = Y.at(i, k) - Y.at(j, k);
                s += diff * diff;
            }
            const double v = 1.0 / (1.0 + s);
            w[i * n + j] = w[j * n + i] = v;
            z += 2.0 * v;
        }
    }
    std::fill(grad.values.begin(), grad.values.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = w[i * n + j];
            const double mult = 4.0 * (exaggeration * P[i * n + j] - v / z) * v;
            for (std::size_t k = 0; k < Y.dim; ++k) grad.at(i, k) += mult * (Y.at(i, k) - Y.at(j, k));
        }
    }
}

}  // namespace

Points kl_gradient(std::span<const double> P, const Points& Y) {
    Points grad(Y.n, Y.dim);
    std::vector<double> w;
    gradient_into(P, Y, 1.0, grad, w);
    return grad;
}

Points pca_init(const Points& data, double stddev) {
    const auto n = static_cast<Eigen::Index>(data.n);
    const auto dim = static_cast<Eigen::Index>(data.dim);
    Eigen::MatrixXd X(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) X(i, j) = data.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    X.rowwise() -= X.colwise().mean();

    Points out(data.n, 2);
    if (n < 2 || dim == 0) return out;
    const Eigen::MatrixXd cov = (X.transpose() * X) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Eigen::MatrixXd& vecs = solver.eigenvectors();  // ascending eigenvalues
    for (Eigen::Index c = 0; c < std::min<Eigen::Index>(2, dim); ++c) {
        Eigen::VectorXd axis = vecs.col(dim - 1 - c);
        Eigen::Index pivot = 0;
        axis.cwiseAbs().maxCoeff(&pivot);
        if (axis(pivot) < 0) axis = -axis;
        Eigen::VectorXd scores = X * axis;
        const double sd = std::sqrt(scores.squaredNorm() / static_cast<double>(n - 1));
        if (sd > 1e-300) scores *= stddev / sd;
        else scores.setZero();
        for (Eigen::Index i = 0; i < n; ++i) out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = scores(i);
    }
    return out;
}

double effective_learning_rate(double configured, std::size_t n, double early_exaggeration) {
    return std::min(configured, static_cast<double>(n) / (4.0 * std::max(1.0, early_exaggeration)));
}

TsneResult tsne(const Points& data, const ProjectionConfig& config) {
    const std::size_t n = data.n;
    if (n < 2) throw UsageError("t-SNE needs at least two points");
    if (!std::all_of(data.values.begin(), data.values.end(), [](double v) { return std::isfinite(v); }))
        throw UsageError("t-SNE input contains non-finite values");
    if (!(config.perplexity > 0.0) || config.perplexity > static_cast<double>(n - 1))
        throw UsageError("perplexity must lie in (0, n-1]");

    const auto cal = perplexity_calibration(squared_distances(data), n, config.perplexity);
    const auto P = joint_affinities(cal, n);

    TsneResult result;
    Points& Y = result.coords;
    Y = pca_init(data, 1e-4);
    Points grad(n, 2);
    Points update(n, 2);
    std::vector<double> gains(n * 2, 1.0);
    std::vector<double> w;
    const double learning_rate = effective_learning_rate(config.learning_rate, n, config.early_exaggeration);

    result.kl_trace.emplace_back(0, kl_divergence(P, Y));
    for (unsigned iter = 0; iter < config.iterations; ++iter) {
        const double exaggeration = iter < config.exaggeration_iterations ? config.early_exaggeration : 1.0;
        const double momentum = iter < config.momentum_switch ? config.initial_momentum : config.final_momentum;
        gradient_into(P, Y, exaggeration, grad, w);
        for (std::size_t i = 0; i < n * 2; ++i) {
            const double g = grad.values[i];
            gains[i] = (g > 0) != (update.values[i] > 0) ? gains[i] + 0.2 : gains[i] * 0.8;
            gains[i] = std::max(gains[i], kMinGain);
            update.values[i] = momentum * update.values[i] - learning_rate * gains[i] * g;
            Y.values[i] += update.values[i];
        }
        for (std::size_t k = 0; k < 2; ++k) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += Y.at(i, k);
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) Y.at(i, k) -= mean;
        }
        const bool first_plain = config.exaggeration_iterations < config.iterations &&
                                 iter == config.exaggeration_iterations;
        if (first_plain || (iter + 1) % kTraceEvery == 0 || iter + 1 == config.iterations)
            result.kl_trace.emplace_back(iter + 1, kl_divergence(P, Y));
        if (first_plain) result.post_exaggeration_kl = result.kl_trace.back().second;
    }
    if (config.exaggeration_iterations >= config.iterations) result.post_exaggeration_kl = result.kl_trace.front().second;
    result.final_kl = result.kl_trace.back().second;
    return result;
}

}  // namespace webvec::viz
