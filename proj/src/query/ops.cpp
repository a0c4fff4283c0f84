#include "webvec/query/ops.hpp"

#include "webvec/corpus/ngrams.hpp"
#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"
#include "webvec/util/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace webvec::query {

namespace {

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw UsageError("cosine: vectors differ in length");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw UndefinedSimilarityError("cosine of a zero vector is undefined");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<double> normalized(std::span<const double> v, std::string_view what) {
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0) throw UndefinedSimilarityError("zero vector for " + std::string(what));
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
    return out;
}

bool ranks_before(const QueryResult& a, const QueryResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
}

// Ranks every eligible row against a unit query vector.
std::vector<QueryResult> rank(const EmbeddingStore& store, std::span<const double> unit_query, std::size_t k,
                              const WordSet& exclude) {
    if (unit_query.size() != store.dim()) throw UsageError("query vector has the wrong dimension");
    std::vector<QueryResult> scored;
    scored.reserve(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        if (store.is_zero(i) || exclude.contains(store.word(i))) continue;
        const auto u = store.unit_row(i);
        const double s = std::inner_product(u.begin(), u.end(), unit_query.begin(), 0.0);
        scored.push_back({store.word(i), std::clamp(s, -1.0, 1.0)});
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      ranks_before);
    scored.resize(take);
    return scored;
}

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }

double cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

std::vector<QueryResult> most_similar(const EmbeddingStore& store, std::span<const double> query, std::size_t k,
                                      const WordSet& exclude) {
    if (k == 0) throw UsageError("k must be at least 1");
    return rank(store, normalized(query, "query"), k, exclude);
}

std::vector<QueryResult> most_similar(const EmbeddingStore& store, std::string_view word, std::size_t k,
                                      const WordSet& exclude) {
    if (k == 0) throw UsageError("k must be at least 1");
    const auto v = store.resolve(word);
    WordSet skip = exclude;
    skip.emplace(word);
    return rank(store, normalized(v, word), k, skip);
}

std::vector<QueryResult> analogy(const EmbeddingStore& store, std::string_view a, std::string_view b,
                                 std::string_view c, std::size_t k) {
    if (k == 0) throw UsageError("k must be at least 1");
    const auto ua = normalized(store.resolve(a), a);
    const auto ub = normalized(store.resolve(b), b);
    const auto uc = normalized(store.resolve(c), c);
    std::vector<double> target(store.dim());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = ub[i] - ua[i] + uc[i];
    return rank(store, normalized(target, "analogy target"), k, {std::string(a), std::string(b), std::string(c)});
}

double compare_groups(const EmbeddingStore& store, std::span<const std::string> group1,
                      std::span<const std::string> group2) {
    if (group1.empty() || group2.empty()) throw UsageError("compare_groups: both groups must be nonempty");
    const auto mean_unit = [&](std::span<const std::string> group) {
        std::vector<double> mean(store.dim(), 0.0);
        for (const auto& w : group) {
            const auto u = normalized(store.resolve(w), w);
            for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += u[i];
        }
        for (double& v : mean) v /= static_cast<double>(group.size());
        return mean;
    };
    return cosine(std::span<const double>(mean_unit(group1)), std::span<const double>(mean_unit(group2)));
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::u32string x = utf8::decode(a);
    const std::u32string y = utf8::decode(b);
    std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= x.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

std::vector<QueryResult> spell_suggest(const EmbeddingStore& store, std::string_view token, std::size_t k,
                                       std::size_t pool) {
    if (token.empty()) throw UsageError("spell_suggest: empty token");
    if (k == 0) throw UsageError("k must be at least 1");
    std::vector<double> query;
    if (const auto i = store.index(token)) {
        const auto r = store.row(*i);
        query.assign(r.begin(), r.end());
    } else {
        const embed::Model* model = store.model();
        if (model == nullptr || !model->config().uses_subwords()) throw UnknownWordError(std::string(token));
        if (model->subwords(token).ngram_rows.empty()) throw NoSignalError(std::string(token));
        const auto composed = model->compose_input(token);
        query.assign(composed.begin(), composed.end());
    }

    auto candidates = rank(store, normalized(query, token), std::max(pool, k), {});
    std::vector<std::pair<std::size_t, QueryResult>> ranked;
    ranked.reserve(candidates.size());
    for (auto& c : candidates) ranked.emplace_back(levenshtein(token, c.word), std::move(c));
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return ranks_before(a.second, b.second);
    });
    std::vector<QueryResult> out;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(std::move(ranked[i].second));
    return out;
}

EvalReport evaluate_questions(const EmbeddingStore& store, std::string_view text) {
    EvalReport report;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto fields = corpus::tokenize(text.substr(pos, end - pos));
        pos = end + 1;
        if (fields.empty() || fields[0].starts_with(':') || fields[0].starts_with('#')) continue;
        if (fields.size() != 4) {
            ++report.malformed;
            continue;
        }
        if (!store.index(fields[3])) {
            ++report.skipped;
            continue;
        }
        std::vector<QueryResult> top;
        try {
            top = analogy(store, fields[0], fields[1], fields[2], 1);
        } catch (const UnknownWordError&) {
            ++report.skipped;
            continue;
        } catch (const UndefinedSimilarityError&) {
            ++report.skipped;
            continue;
        }
        ++report.answered;
        if (!top.empty() && top.front().word == fields[3]) ++report.correct;
    }
    return report;
}

EvalReport evaluate_questions_file(const EmbeddingStore& store, const std::filesystem::path& path) {
    return evaluate_questions(store, io::read_file(path));
}

}  // namespace webvec::query
