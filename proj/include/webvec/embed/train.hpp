#pragma once

#include "webvec/corpus/ngrams.hpp"
#include "webvec/corpus/vocab.hpp"
#include "webvec/embed/model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace webvec::embed {

/// Keep probability of a token under frequent-word subsampling:
/// min(1, sqrt(t/f) + t/f) with f = count/total_tokens.
double subsample_keep_prob(std::uint64_t count, std::uint64_t total_tokens, double t);

/// Table of word ids where id w fills a share proportional to
/// count(w)^exponent. Slots are allotted by largest remainder, so the
/// length is exactly `size`.
std::vector<std::int32_t> negative_table(const corpus::Vocab& vocab, std::size_t size,
                                         double exponent = 0.75);

struct NsGradients {
    double loss = 0.0;
    std::vector<double> grad_h;
    std::vector<double> grad_target;
    std::vector<std::vector<double>> grad_negatives;
};

/// Negative-sampling loss of one (hidden, target, negatives) triple and its
/// gradients with respect to every argument:
///   loss = -log s(u_t.h) - sum_i log s(-u_i.h)
/// Throws UsageError on mismatched lengths or non-finite input.
NsGradients ns_loss_and_grads(std::span<const double> h, std::span<const double> target,
                              std::span<const std::vector<double>> negatives);

struct TrainingLog {
    std::vector<double> epoch_mean_loss;  ///< mean loss per (hidden, target) update
    std::uint64_t corpus_tokens = 0;      ///< in-vocabulary tokens per epoch
};

/// Trains a model on tokenized sentences. The vocabulary is built from the
/// corpus with config.min_count. Results are bit-reproducible for a fixed
/// seed when config.threads == 1.
Model train(std::span<const corpus::Sentence> sentences, const TrainingConfig& config,
            TrainingLog* log = nullptr);

/// Same as train() on a one-sentence-per-line text file (gzip allowed).
Model train_file(const std::filesystem::path& corpus, const TrainingConfig& config,
                 TrainingLog* log = nullptr);

}  // namespace webvec::embed
