#include "webvec/embed/train.hpp"

#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace webvec::embed {

namespace {

constexpr std::size_t kNegativeTableSize = 10'000'000;
constexpr double kMinLearningRate = 1e-5;

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// -log s(x), stable for large |x|.
double neg_log_sigmoid(double x) {
    return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

/// Loss and dLoss/dscore of one binary term (label 1 = true target).
struct NsTerm {
    double loss;
    double coeff;
};

NsTerm ns_term(double score, bool positive) {
    if (positive) return {neg_log_sigmoid(score), sigmoid(score) - 1.0};
    return {neg_log_sigmoid(-score), sigmoid(score)};
}

/// Per-thread scratch and sampling state.
class Worker {
public:
    Worker(Model& model, const std::vector<std::int32_t>& negatives, const std::vector<double>& keep,
           const TrainingConfig& config, std::uint64_t seed)
        : model_(model), negatives_(negatives), keep_(keep), config_(config), rng_(seed),
          hidden_(config.dim), grad_(config.dim), composed_(config.dim) {}

    double loss_sum = 0.0;
    std::uint64_t updates = 0;

    /// Drops subsampled tokens from one sentence.
    void subsample(const std::vector<std::int32_t>& in, std::vector<std::int32_t>& out) {
        out.clear();
        for (const auto id : in) {
            if (keep_[id] >= 1.0 || uniform() < keep_[id]) out.push_back(id);
        }
    }

    void skipgram(const std::vector<std::int32_t>& line, double lr) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const std::size_t span = window();
            const auto& rows = model_.word_rows(line[i]);
            for (std::size_t c = i >= span ? i - span : 0; c <= i + span && c < line.size(); ++c) {
                if (c == i) continue;
                mean_rows(model_.input(), rows, hidden_);
                update(line[c], lr);
                apply_input(rows, lr, 1.0 / static_cast<double>(rows.size()));
            }
        }
    }

    void cbow(const std::vector<std::int32_t>& line, double lr) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const std::size_t span = window();
            std::fill(hidden_.begin(), hidden_.end(), 0.0f);
            context_.clear();
            for (std::size_t c = i >= span ? i - span : 0; c <= i + span && c < line.size(); ++c) {
                if (c != i) context_.push_back(line[c]);
            }
            if (context_.empty()) continue;
            const double inv = 1.0 / static_cast<double>(context_.size());
            std::vector<double> acc(config_.dim, 0.0);
            for (const auto id : context_) {
                mean_rows(model_.input(), model_.word_rows(id), composed_);
                for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += composed_[j];
            }
            for (std::size_t j = 0; j < acc.size(); ++j) hidden_[j] = static_cast<float>(acc[j] * inv);
            update(line[i], lr);
            for (const auto id : context_) {
                const auto& rows = model_.word_rows(id);
                apply_input(rows, lr, inv / static_cast<double>(rows.size()));
            }
        }
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::size_t window() {
        if (config_.window == 0) return 0;
        return 1 + static_cast<std::size_t>(rng_() % config_.window);
    }

    std::int32_t draw_negative(std::int32_t target) {
        while (true) {
            const auto id = negatives_[rng_() % negatives_.size()];
            if (id != target) return id;
        }
    }

    // One target plus k negatives against hidden_. Output rows are updated
    // immediately; the input gradient is left in grad_.
    void update(std::int32_t target, double lr) {
        std::fill(grad_.begin(), grad_.end(), 0.0f);
        const bool can_sample = model_.vocab().size() > 1;
        const unsigned k = can_sample ? config_.negatives : 0;
        for (unsigned n = 0; n <= k; ++n) {
            const bool positive = n == 0;
            const std::int32_t id = positive ? target : draw_negative(target);
            auto out = model_.output().row(static_cast<std::size_t>(id));
            double score = 0.0;
            for (std::size_t j = 0; j < out.size(); ++j) score += static_cast<double>(out[j]) * hidden_[j];
            const NsTerm term = ns_term(score, positive);
            loss_sum += term.loss;
            const auto g = static_cast<float>(term.coeff);
            const auto step = static_cast<float>(lr * term.coeff);
            for (std::size_t j = 0; j < out.size(); ++j) {
                grad_[j] += g * out[j];
                out[j] -= step * hidden_[j];
            }
        }
        ++updates;
    }

    void apply_input(const std::vector<std::int32_t>& rows, double lr, double share) {
        const auto step = static_cast<float>(lr * share);
        for (const auto r : rows) {
            auto in = model_.input().row(static_cast<std::size_t>(r));
            for (std::size_t j = 0; j < in.size(); ++j) in[j] -= step * grad_[j];
        }
    }

    Model& model_;
    const std::vector<std::int32_t>& negatives_;
    const std::vector<double>& keep_;
    const TrainingConfig& config_;
    std::mt19937_64 rng_;
    std::vector<float> hidden_;
    std::vector<float> grad_;
    std::vector<float> composed_;
    std::vector<std::int32_t> context_;
};

}  // namespace

double subsample_keep_prob(std::uint64_t count, std::uint64_t total_tokens, double t) {
    if (count == 0 || total_tokens < count) throw UsageError("subsample_keep_prob: need total >= count >= 1");
    if (t <= 0.0) return 0.0;
    const double ratio = t / (static_cast<double>(count) / static_cast<double>(total_tokens));
    return std::min(1.0, std::sqrt(ratio) + ratio);
}

std::vector<std::int32_t> negative_table(const corpus::Vocab& vocab, std::size_t size, double exponent) {
    if (vocab.empty()) throw UsageError("negative_table: empty vocabulary");
    std::vector<double> weight(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i)
        weight[i] = std::pow(static_cast<double>(vocab[i].count), exponent);
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);

    std::vector<std::size_t> slots(vocab.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t used = 0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const double exact = static_cast<double>(size) * weight[i] / total;
        slots[i] = static_cast<std::size_t>(std::floor(exact));
        used += slots[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; used < size; ++r, ++used) ++slots[remainders[r % remainders.size()].second];

    std::vector<std::int32_t> table;
    table.reserve(size);
    for (std::size_t i = 0; i < vocab.size(); ++i) table.insert(table.end(), slots[i], static_cast<std::int32_t>(i));
    return table;
}

NsGradients ns_loss_and_grads(std::span<const double> h, std::span<const double> target,
                              std::span<const std::vector<double>> negatives) {
    const std::size_t dim = h.size();
    const auto finite = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (target.size() != dim) throw UsageError("ns_loss_and_grads: target length differs from hidden");
    if (!finite(h) || !finite(target)) throw UsageError("ns_loss_and_grads: non-finite input");
    for (const auto& neg : negatives) {
        if (neg.size() != dim) throw UsageError("ns_loss_and_grads: negative length differs from hidden");
        if (!finite(neg)) throw UsageError("ns_loss_and_grads: non-finite input");
    }

    NsGradients out;
    out.grad_h.assign(dim, 0.0);
    const auto term = [&](std::span<const double> row, bool positive, std::vector<double>& grad_row) {
        const double score = std::inner_product(row.begin(), row.end(), h.begin(), 0.0);
        const NsTerm t = ns_term(score, positive);
        out.loss += t.loss;
        grad_row.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            out.grad_h[j] += t.coeff * row[j];
            grad_row[j] = t.coeff * h[j];
        }
    };
    term(target, true, out.grad_target);
    out.grad_negatives.resize(negatives.size());
    for (std::size_t i = 0; i < negatives.size(); ++i) term(negatives[i], false, out.grad_negatives[i]);
    return out;
}

Model train(std::span<const corpus::Sentence> sentences, const TrainingConfig& config, TrainingLog* log) {
    config.validate();
    const corpus::Vocab vocab = corpus::build_vocab(corpus::count_ngrams(sentences, 1), config.min_count);
    if (vocab.empty()) throw UsageError("training corpus has no word with count >= min_count");

    std::vector<std::vector<std::int32_t>> lines;
    lines.reserve(sentences.size());
    std::uint64_t tokens = 0;
    for (const auto& s : sentences) {
        std::vector<std::int32_t> ids;
        for (const auto& w : s) {
            if (const auto id = vocab.id(w)) ids.push_back(*id);
        }
        tokens += ids.size();
        if (!ids.empty()) lines.push_back(std::move(ids));
    }

    Model model = Model::initialize(vocab, config);
    if (log != nullptr) {
        log->epoch_mean_loss.assign(config.epochs, 0.0);
        log->corpus_tokens = tokens;
    }
    if (config.epochs == 0) return model;

    const auto table = negative_table(model.vocab(), kNegativeTableSize);
    std::vector<double> keep(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i)
        keep[i] = subsample_keep_prob(vocab[i].count, vocab.total_count(), config.subsample_t);

    const unsigned threads = std::max(1u, config.threads);
    const double scheduled = static_cast<double>(tokens) * config.epochs;
    std::atomic<std::uint64_t> processed{0};
    std::vector<std::vector<double>> loss(threads, std::vector<double>(config.epochs, 0.0));
    std::vector<std::vector<std::uint64_t>> updates(threads, std::vector<std::uint64_t>(config.epochs, 0));

    const auto run = [&](unsigned t) {
        Worker worker(model, table, keep, config, config.seed + 0x9E3779B97F4A7C15ULL * t);
        const std::size_t begin = lines.size() * t / threads;
        const std::size_t end = lines.size() * (t + 1) / threads;
        std::vector<std::int32_t> kept;
        for (unsigned epoch = 0; epoch < config.epochs; ++epoch) {
            worker.loss_sum = 0.0;
            worker.updates = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const double progress = static_cast<double>(processed.load(std::memory_order_relaxed)) / scheduled;
                const double lr = std::max(kMinLearningRate, config.lr0 * (1.0 - progress));
                worker.subsample(lines[i], kept);
                if (config.mode == TrainingMode::kCbowSubword) worker.cbow(kept, lr);
                else worker.skipgram(kept, lr);
                processed.fetch_add(lines[i].size(), std::memory_order_relaxed);
            }
            loss[t][epoch] = worker.loss_sum;
            updates[t][epoch] = worker.updates;
        }
    };

    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
    }

    if (log != nullptr) {
        for (unsigned e = 0; e < config.epochs; ++e) {
            double sum = 0.0;
            std::uint64_t count = 0;
            for (unsigned t = 0; t < threads; ++t) {
                sum += loss[t][e];
                count += updates[t][e];
            }
            log->epoch_mean_loss[e] = count == 0 ? 0.0 : sum / static_cast<double>(count);
        }
    }
    return model;
}

Model train_file(const std::filesystem::path& corpus, const TrainingConfig& config, TrainingLog* log) {
    std::vector<corpus::Sentence> sentences;
    for (const auto& line : io::read_lines(corpus)) sentences.push_back(corpus::tokenize(line));
    return train(sentences, config, log);
}

}  // namespace webvec::embed
