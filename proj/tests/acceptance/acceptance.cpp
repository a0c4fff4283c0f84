// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "support.hpp"

#include "webvec/corpus/dedup.hpp"
#include "webvec/corpus/ngrams.hpp"
#include "webvec/corpus/vocab.hpp"
#include "webvec/embed/model.hpp"
#include "webvec/embed/subword.hpp"
#include "webvec/embed/train.hpp"
#include "webvec/embed/vectors_io.hpp"
#include "webvec/error.hpp"
#include "webvec/ingest/pipeline.hpp"
#include "webvec/query/ops.hpp"
#include "webvec/query/store.hpp"
#include "webvec/service/explorer.hpp"
#include "webvec/util/gzip.hpp"
#include "webvec/viz/kmeans.hpp"
#include "webvec/viz/map.hpp"
#include "webvec/viz/tsne.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace webvec;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// ---- independent oracles ------------------------------------------------

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        const std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
        char32_t cp = len == 1 ? c : len == 2 ? c & 0x1F : len == 3 ? c & 0x0F : c & 0x07;
        for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    for (char32_t cp : s) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }
    return out;
}

std::multiset<std::string> enumerate_ngrams(std::string_view word, unsigned nmin, unsigned nmax) {
    const std::u32string padded = U"<" + decode_utf8(word) + U">";
    std::multiset<std::string> out;
    for (std::size_t i = 0; i < padded.size(); ++i)
        for (unsigned n = nmin; n <= nmax && i + n <= padded.size(); ++n)
            if (n < padded.size()) out.insert(encode_utf8(std::u32string_view(padded).substr(i, n)));
    return out;
}

std::uint32_t fnv_oracle(std::string_view s) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : s) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

std::size_t levenshtein_oracle(std::string_view a, std::string_view b) {
    const auto x = decode_utf8(a), y = decode_utf8(b);
    std::vector<std::vector<std::size_t>> d(x.size() + 1, std::vector<std::size_t>(y.size() + 1));
    for (std::size_t i = 0; i <= x.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= y.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= x.size(); ++i)
        for (std::size_t j = 1; j <= y.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (x[i - 1] != y[j - 1])});
    return d[x.size()][y.size()];
}

std::vector<double> unit(std::span<const float> v) {
    double n = 0;
    for (float x : v) n += static_cast<double>(x) * x;
    n = std::sqrt(n);
    std::vector<double> out;
    for (float x : v) out.push_back(x / n);
    return out;
}

std::vector<query::QueryResult> scan(const query::EmbeddingStore& s, const std::vector<double>& q, std::size_t k,
                                     const std::set<std::string>& exclude) {
    double qn = 0;
    for (double x : q) qn += x * x;
    qn = std::sqrt(qn);
    std::vector<query::QueryResult> all;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (exclude.contains(s.word(i))) continue;
        const auto u = unit(s.row(i));
        double d = 0;
        for (std::size_t j = 0; j < q.size(); ++j) d += u[j] * q[j];
        all.push_back({s.word(i), std::clamp(d / qn, -1.0, 1.0)});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.score != b.score ? a.score > b.score : a.word < b.word;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

bool same_results(const std::vector<query::QueryResult>& got, const std::vector<query::QueryResult>& want) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (got[i].word != want[i].word || std::abs(got[i].score - want[i].score) > 1e-9) return false;
    return true;
}

double vector_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

template <typename F>
std::vector<double> numeric_grad(std::vector<double> x, F&& f, double eps = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + eps;
        const double up = f(x);
        x[i] = keep - eps;
        const double down = f(x);
        x[i] = keep;
        g[i] = (up - down) / (2 * eps);
    }
    return g;
}

// ---- criteria -----------------------------------------------------------

Outcome ingestion() {
    Outcome o;
    const auto start = Clock::now();
    const fs::path fixtures = test_support::fixture_dir();
    test_support::TempDir tmp;
    std::size_t files = 0, compared = 0;
    for (const auto& warc : ingest::list_warc_files(fixtures / "warc")) {
        std::string stem = warc.filename().string();
        stem = stem.substr(0, stem.find('.'));
        const fs::path out = tmp.path() / stem;
        const auto results = ingest::extract_warc_files({warc}, out, 1);
        const fs::path golden = fixtures / "golden" / stem;
        const auto& st = results.at(0).stats;
        std::istringstream expected_stats(slurp(golden / "stats.tsv"));
        std::size_t records = 0, docs = 0, skipped = 0, errors = 0;
        expected_stats >> records >> docs >> skipped >> errors;
        o.require(st.records == records && st.documents == docs && st.skipped == skipped && st.errors == errors,
                  stem + ": record counters differ from golden");
        std::size_t golden_domains = 0;
        for (const auto& g : fs::directory_iterator(golden)) {
            const std::string name = g.path().filename().string();
            if (name == "stats.tsv") continue;
            ++golden_domains;
            const fs::path produced = out / (name + ".gz");
            o.require(fs::exists(produced), stem + ": missing " + produced.filename().string());
            if (fs::exists(produced))
                o.require(io::read_file(produced) == slurp(g.path()), stem + "/" + name + " differs from golden");
            ++compared;
        }
        std::size_t produced_domains = 0;
        if (fs::exists(out))
            for ([[maybe_unused]] const auto& e : fs::directory_iterator(out)) ++produced_domains;
        o.require(produced_domains == golden_domains, stem + ": unexpected domain files");
        ++files;
    }
    const double secs = seconds_since(start);
    o.require(files == 10, "expected 10 fixture files, found " + std::to_string(files));
    o.require(secs < 5.0, "runtime " + fmt(secs) + " s");
    if (o.pass) o.detail = std::to_string(files) + " files, " + std::to_string(compared) + " domain files, " + fmt(secs) + " s";
    return o;
}

Outcome dedup() {
    Outcome o;
    std::mt19937_64 rng(1001);
    std::vector<std::string> base;
    std::set<std::string> seen;
    while (base.size() < 2500) {
        std::string s;
        for (int w = 0, n = 3 + static_cast<int>(rng() % 8); w < n; ++w)
            s += (w ? " " : "") + test_support::random_greek_word(rng, 8);
        if (seen.insert(s).second) base.push_back(s);
    }
    std::vector<std::string> corpus;
    for (int copy = 0; copy < 4; ++copy) corpus.insert(corpus.end(), base.begin(), base.end());
    std::shuffle(corpus.begin(), corpus.end(), rng);

    corpus::DedupStats stats;
    const auto once = corpus::dedup_sentences(corpus, &stats);
    o.require(stats.total_sentences == 10000 && stats.unique_sentences == 2500, "unexpected counts");
    o.require(static_cast<double>(stats.unique_sentences) / static_cast<double>(stats.total_sentences) == 0.25,
              "unique/total is not 0.25");
    o.require(stats.reduction_ratio() == 0.75, "reduction ratio " + fmt(stats.reduction_ratio()));
    o.require(std::set<std::string>(once.begin(), once.end()) == seen, "unique set differs");
    corpus::DedupStats again_stats;
    const auto twice = corpus::dedup_sentences(once, &again_stats);
    o.require(twice == once && again_stats.reduction_ratio() == 0.0, "second run changed the output");
    if (o.pass) o.detail = "10000 -> 2500, ratio 0.75, idempotent";
    return o;
}

Outcome ngrams() {
    Outcome o;
    std::mt19937_64 rng(1002);
    std::vector<std::string> tokens;
    for (int i = 0; i < 60; ++i) tokens.push_back(test_support::random_greek_word(rng, 5));
    std::vector<corpus::Sentence> sentences;
    for (int i = 0; i < 1000; ++i) {
        corpus::Sentence s;
        for (std::size_t j = 0, n = rng() % 15; j < n; ++j) s.push_back(tokens[rng() % tokens.size()]);
        sentences.push_back(std::move(s));
    }
    for (unsigned n = 1; n <= 3; ++n) {
        std::map<std::string, std::uint64_t> oracle;
        for (const auto& s : sentences)
            for (std::size_t i = 0; i + n <= s.size(); ++i) {
                std::string key = s[i];
                for (std::size_t j = 1; j < n; ++j) key += " " + s[i + j];
                ++oracle[key];
            }
        for (unsigned threads : {1u, 4u}) {
            const auto table = threads == 1 ? corpus::count_ngrams(sentences, n)
                                            : corpus::count_ngrams_parallel(sentences, n, threads);
            std::map<std::string, std::uint64_t> got;
            for (const auto& [k, v] : corpus::sorted_rows(table)) got[k] = v;
            o.require(got == oracle, std::to_string(n) + "-gram table differs (threads " + std::to_string(threads) + ")");
        }
    }
    if (o.pass) o.detail = "1000 sentences, n = 1..3, sequential and parallel";
    return o;
}

Outcome subwords() {
    Outcome o;
    std::mt19937_64 rng(1003);
    for (int i = 0; i < 100; ++i) {
        const auto w = test_support::random_greek_word(rng, 12);
        const auto got = embed::char_ngrams(w, 3, 6);
        o.require(std::multiset<std::string>(got.begin(), got.end()) == enumerate_ngrams(w, 3, 6),
                  "char_ngrams mismatch for " + w);
    }
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 10000; ++i) {
        std::string s(rng() % 24, '\0');
        for (auto& c : s) c = static_cast<char>(byte(rng));
        const std::uint32_t buckets = 1 + static_cast<std::uint32_t>(rng() % 2000000);
        o.require(embed::fnv1a32(s) == fnv_oracle(s), "fnv1a32 mismatch");
        o.require(embed::hash_subword(s, buckets) == fnv_oracle(s) % buckets, "hash_subword mismatch");
    }
    if (o.pass) o.detail = "100 words, 10000 hashes";
    return o;
}

Outcome gradients() {
    Outcome o;
    std::mt19937_64 rng(1004);
    std::normal_distribution<double> N(0.0, 0.7);
    const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    const auto log_sigmoid = [](double x) { return -std::log1p(std::exp(-x)); };
    double worst_ns = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + rng() % 8, k = 1 + rng() % 5;
        std::vector<double> h(dim), t(dim);
        std::vector<std::vector<double>> negs(k, std::vector<double>(dim));
        for (auto& x : h) x = N(rng);
        for (auto& x : t) x = N(rng);
        for (auto& v : negs)
            for (auto& x : v) x = N(rng);
        const auto loss = [&](const std::vector<double>& hh, const std::vector<double>& tt,
                              const std::vector<std::vector<double>>& nn) {
            double l = -log_sigmoid(dot(tt, hh));
            for (const auto& u : nn) l -= log_sigmoid(-dot(u, hh));
            return l;
        };
        const auto g = embed::ns_loss_and_grads(h, t, negs);
        worst_ns = std::max(worst_ns, vector_rel_error(g.grad_h, numeric_grad(h, [&](const auto& x) { return loss(x, t, negs); })));
        worst_ns = std::max(worst_ns, vector_rel_error(g.grad_target, numeric_grad(t, [&](const auto& x) { return loss(h, x, negs); })));
        for (std::size_t i = 0; i < k; ++i) {
            worst_ns = std::max(worst_ns, vector_rel_error(g.grad_negatives[i], numeric_grad(negs[i], [&](const auto& x) {
                auto copy = negs;
                copy[i] = x;
                return loss(h, t, copy);
            })));
        }
    }
    o.require(worst_ns < 1e-4, "ns relative error " + fmt(worst_ns));

    double worst_tsne = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 4;
        viz::Points x(n, 3), y(n, 2);
        for (auto& v : x.values) v = N(rng);
        for (auto& v : y.values) v = N(rng);
        const auto P = viz::joint_affinities(
            viz::perplexity_calibration(viz::squared_distances(x), n, std::max(0.5, (n - 1) / 2.0)), n);
        const auto g = viz::kl_gradient(P, y);
        const auto fd = numeric_grad(y.values, [&](const auto& v) {
            viz::Points yy = y;
            yy.values = v;
            return viz::kl_divergence(P, yy);
        });
        worst_tsne = std::max(worst_tsne, vector_rel_error(g.values, fd));
    }
    o.require(worst_tsne < 1e-3, "t-SNE relative error " + fmt(worst_tsne));
    if (o.pass) o.detail = "ns max rel err " + fmt(worst_ns) + ", t-SNE max rel err " + fmt(worst_tsne);
    return o;
}

Outcome training_signal() {
    Outcome o;
    const auto start = Clock::now();
    const std::vector<std::string> a = {"γάτα", "σκύλος", "άλογο", "πρόβατο", "κότα"};
    const std::vector<std::string> b = {"τρένο", "πλοίο", "αεροπλάνο", "ποδήλατο", "λεωφορείο"};
    std::mt19937_64 rng(4);
    std::vector<corpus::Sentence> sentences;
    for (int i = 0; i < 500; ++i) {
        const auto& topic = i % 2 ? a : b;
        corpus::Sentence s;
        for (int j = 0; j < 8; ++j) s.push_back(topic[rng() % topic.size()]);
        sentences.push_back(std::move(s));
    }
    embed::TrainingConfig cfg;
    cfg.dim = 16;
    cfg.epochs = 10;
    cfg.min_count = 1;
    cfg.threads = 1;
    cfg.seed = 0;
    cfg.buckets = 10000;
    cfg.subsample_t = 0.1;  // the default threshold discards nearly every token of a 10-word vocabulary
    embed::TrainingLog log;
    const auto model = embed::train(sentences, cfg, &log);
    std::vector<std::string> all = a;
    all.insert(all.end(), b.begin(), b.end());
    double intra = 0, inter = 0;
    int n_intra = 0, n_inter = 0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const auto vi = model.compose_input(all[i]);
            const auto vj = model.compose_input(all[j]);
            const double c = query::cosine(std::span<const float>(vi), std::span<const float>(vj));
            if ((i < 5) == (j < 5)) intra += c, ++n_intra;
            else inter += c, ++n_inter;
        }
    const double margin = intra / n_intra - inter / n_inter;
    const double secs = seconds_since(start);
    o.require(log.epoch_mean_loss.size() == 10, "expected 10 epoch losses");
    o.require(margin >= 0.2, "intra-inter margin " + fmt(margin));
    if (log.epoch_mean_loss.size() >= 5)
        o.require(log.epoch_mean_loss[4] < log.epoch_mean_loss[0], "epoch-5 loss not below epoch-1 loss");
    o.require(secs < 60.0, "runtime " + fmt(secs) + " s");
    if (o.pass)
        o.detail = "margin " + fmt(margin) + ", loss " + fmt(log.epoch_mean_loss[0]) + " -> " +
                   fmt(log.epoch_mean_loss[4]) + ", " + fmt(secs) + " s";
    return o;
}

Outcome queries() {
    Outcome o;
    std::mt19937_64 rng(1007);
    std::normal_distribution<float> N;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng() % 996, dim = 1 + rng() % 32;
        embed::WordVectors v;
        v.dim = dim;
        for (std::size_t i = 0; i < n; ++i) v.words.push_back("w" + std::to_string(i));
        for (std::size_t i = 0; i < n * dim; ++i) v.data.push_back(N(rng));
        const query::EmbeddingStore s(std::move(v));
        const std::size_t k = 1 + rng() % 20;
        const auto q = s.word(rng() % n);
        o.require(same_results(query::most_similar(s, q, k), scan(s, unit(s.row(*s.index(q))), k, {q})),
                  "most_similar differs on store " + std::to_string(trial));
        const auto wa = s.word(rng() % n), wb = s.word(rng() % n), wc = s.word(rng() % n);
        const auto ua = unit(s.row(*s.index(wa))), ub = unit(s.row(*s.index(wb))), uc = unit(s.row(*s.index(wc)));
        std::vector<double> target(dim);
        double norm = 0;
        for (std::size_t j = 0; j < dim; ++j) norm += (target[j] = ub[j] - ua[j] + uc[j]) * target[j];
        if (norm > 1e-12)
            o.require(same_results(query::analogy(s, wa, wb, wc, k), scan(s, target, k, {wa, wb, wc})),
                      "analogy differs on store " + std::to_string(trial));
    }

    // Spell suggestions on randomly initialized subword models.
    for (int trial = 0; trial < 50; ++trial) {
        std::set<std::string> words;
        const std::size_t n = 5 + rng() % 300;
        while (words.size() < n) words.insert(test_support::random_greek_word(rng, 9));
        std::vector<corpus::VocabEntry> entries;
        for (const auto& w : words) entries.push_back({w, 1 + rng() % 100});
        embed::TrainingConfig cfg;
        cfg.dim = 1 + rng() % 32;
        cfg.buckets = 5000;
        cfg.seed = static_cast<std::uint64_t>(trial);
        auto model = std::make_shared<const embed::Model>(embed::Model::initialize(corpus::Vocab(entries, 1), cfg));
        const auto s = query::EmbeddingStore::from_model(model);
        // Misspell a vocabulary word by dropping one letter.
        auto token = decode_utf8(s.word(rng() % s.size()));
        if (token.size() > 3) token.erase(rng() % token.size(), 1);
        const std::string t = encode_utf8(token);
        const std::size_t k = 1 + rng() % 10;
        std::vector<query::QueryResult> got;
        try {
            got = query::spell_suggest(s, t, k);
        } catch (const NoSignalError&) {
            continue;
        }
        std::vector<double> qv;
        if (const auto i = s.index(t)) {
            const auto r = s.row(*i);
            qv.assign(r.begin(), r.end());
        } else {
            const auto c = model->compose_input(t);
            qv.assign(c.begin(), c.end());
        }
        auto pool = scan(s, qv, std::max<std::size_t>(50, k), {});
        std::stable_sort(pool.begin(), pool.end(), [&](const auto& x, const auto& y) {
            return levenshtein_oracle(t, x.word) < levenshtein_oracle(t, y.word);
        });
        if (pool.size() > k) pool.resize(k);
        o.require(same_results(got, pool), "spell_suggest differs for " + t);
    }

    // b - a + c points exactly at d.
    embed::WordVectors forced;
    forced.dim = 3;
    forced.words = {"a", "b", "c", "d", "e"};
    forced.data = {1, 0, 0, 0, 1, 0, 0, 0, 1, -1, 1, 1, 1, 1, -1};
    const query::EmbeddingStore fs_store(std::move(forced));
    const auto r = query::analogy(fs_store, "a", "b", "c", 1);
    o.require(!r.empty() && r[0].word == "d", "forced winner not at rank 1");
    if (o.pass) o.detail = "50 stores per oracle, forced winner at rank 1";
    return o;
}

Outcome vector_format() {
    Outcome o;
    test_support::TempDir tmp;
    std::mt19937_64 rng(1008);
    std::normal_distribution<float> N;
    embed::WordVectors v;
    v.dim = 300;
    for (int i = 0; i < 200; ++i) v.words.push_back(test_support::random_greek_word(rng) + std::to_string(i));
    for (std::size_t i = 0; i < 200 * 300; ++i) v.data.push_back(N(rng) * std::pow(10.0f, static_cast<float>(rng() % 20) - 10));
    embed::write_vectors(v, tmp / "a.vec");
    const auto loaded = embed::read_vectors(tmp / "a.vec");
    embed::write_vectors(loaded, tmp / "b.vec");
    const std::string first = slurp(tmp / "a.vec");
    o.require(first == slurp(tmp / "b.vec"), "save/load/save is not byte-identical");
    o.require(first.starts_with("200 300\n"), "header is not \"V 300\"");
    o.require(loaded.words == v.words && loaded.data == v.data && loaded.dim == 300, "values changed on load");
    if (o.pass) o.detail = "200 x 300, byte-identical";
    return o;
}

Outcome viz_checks() {
    Outcome o;
    std::mt19937_64 rng(1009);
    std::normal_distribution<double> N;
    viz::Points x(50, 16);
    for (auto& v : x.values) v = N(rng);
    for (std::size_t j = 0; j < 16; ++j) x.at(49, j) = x.at(7, j);
    viz::ProjectionConfig cfg;
    cfg.perplexity = 10;
    const auto t = viz::tsne(x, cfg);
    o.require(t.final_kl < t.post_exaggeration_kl,
              "final KL " + fmt(t.final_kl) + " not below " + fmt(t.post_exaggeration_kl));
    const auto d = viz::squared_distances(t.coords);
    std::vector<double> pairs;
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = i + 1; j < 50; ++j) pairs.push_back(d[i * 50 + j]);
    std::sort(pairs.begin(), pairs.end());
    const double cutoff = pairs[pairs.size() / 100];
    o.require(d[7 * 50 + 49] <= cutoff, "duplicate pair outside the closest 1%");

    for (int trial = 0; trial < 20; ++trial) {
        viz::Points p(20 + rng() % 200, 2);
        for (auto& v : p.values) v = N(rng);
        const auto r = viz::kmeans(p, 1 + rng() % 12, static_cast<std::uint64_t>(trial));
        for (std::size_t i = 1; i < r.inertia_trace.size(); ++i)
            o.require(r.inertia_trace[i] <= r.inertia_trace[i - 1], "inertia increased");
    }
    std::normal_distribution<double> tight(0.0, 0.1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        viz::Points p(100, 2);
        for (std::size_t i = 0; i < 100; ++i) {
            const double c = i < 50 ? 10.0 : -10.0;
            p.at(i, 0) = c + tight(rng);
            p.at(i, 1) = c + tight(rng);
        }
        const auto r = viz::kmeans(p, 2, seed);
        for (std::size_t i = 0; i < 100; ++i)
            o.require((r.assignment[i] == r.assignment[0]) == (i < 50), "two blobs not recovered");
    }

    const auto start = Clock::now();
    embed::WordVectors v;
    v.dim = 32;
    for (int i = 0; i < 600; ++i) v.words.push_back("λ" + std::to_string(i));
    std::normal_distribution<float> F;
    for (std::size_t i = 0; i < 600 * 32; ++i) v.data.push_back(F(rng));
    const query::EmbeddingStore store(std::move(v));
    viz::ProjectionConfig map_cfg;
    map_cfg.sample_size = 500;
    const auto map = viz::build_map(store, 10, map_cfg);
    const double secs = seconds_since(start);
    o.require(map.points.size() == 500, "map has " + std::to_string(map.points.size()) + " points");
    o.require(secs < 120.0, "map build took " + fmt(secs) + " s");
    if (o.pass)
        o.detail = "KL " + fmt(t.post_exaggeration_kl) + " -> " + fmt(t.final_kl) + ", 500-point map " + fmt(secs) + " s";
    return o;
}

Outcome service_api() {
    Outcome o;
    std::mt19937_64 rng(1010);
    std::normal_distribution<float> N;
    embed::WordVectors v;
    v.dim = 6;
    for (int i = 0; i < 40; ++i) v.words.push_back("λ" + std::to_string(i));
    for (std::size_t i = 0; i < 40 * 6; ++i) v.data.push_back(N(rng));
    auto store = std::make_shared<const query::EmbeddingStore>(std::move(v));
    service::ServiceConfig cfg;
    cfg.static_dir = test_support::fixture_dir() / "no-ui-assets-here";
    cfg.projection.iterations = 300;
    service::ExplorerService svc(store, cfg);

    const auto results = [](const std::vector<query::QueryResult>& rs) {
        json out = json::array();
        for (const auto& r : rs) out.push_back({{"word", r.word}, {"score", r.score}});
        return out;
    };

    auto r = svc.most_similar({{"w", "λ1"}, {"k", "5"}});
    o.require(r.status == 200 && json::parse(r.body)["neighbors"] == results(query::most_similar(*store, "λ1", 5)),
              "most_similar body differs");
    r = svc.analogy({{"a", "λ1"}, {"b", "λ2"}, {"c", "λ3"}});
    o.require(r.status == 200 && json::parse(r.body)["results"] == results(query::analogy(*store, "λ1", "λ2", "λ3", 5)),
              "analogy body differs");
    r = svc.similarity({{"w1", "λ1"}, {"w2", "λ2"}});
    const double sim = query::cosine(store->unit_row(1), store->unit_row(2));
    o.require(r.status == 200 && std::abs(json::parse(r.body)["score"].get<double>() - sim) <= 5e-7,
              "similarity differs");
    r = svc.compare(R"({"group1":["λ1","λ2"],"group2":["λ3"]})");
    const std::vector<std::string> g1 = {"λ1", "λ2"}, g2 = {"λ3"};
    o.require(r.status == 200 && json::parse(r.body)["score"].get<double>() == query::compare_groups(*store, g1, g2),
              "compare differs");
    r = svc.map({{"n", "12"}, {"k", "3"}});
    viz::ProjectionConfig pc = cfg.projection;
    pc.sample_size = 12;
    const auto direct = viz::build_map(*store, 3, pc);
    json expected_points = json::array();
    for (const auto& p : direct.points)
        expected_points.push_back({{"word", p.word}, {"x", p.x}, {"y", p.y}, {"cluster", p.cluster}});
    o.require(r.status == 200 && json::parse(r.body)["points"] == expected_points &&
                  json::parse(r.body)["kl"].get<double>() == direct.kl,
              "map differs");
    o.require(svc.map({{"n", "12"}, {"k", "3"}}).body == r.body, "map not stable across calls");
    r = svc.info();
    o.require(json::parse(r.body) == json{{"vocab_size", 40}, {"dim", 6}, {"mode", "vectors"}}, "info differs");

    o.require(svc.similarity({{"w1", "λ1"}}).status == 400, "missing parameter not 400");
    o.require(svc.most_similar({{"w", "λ1"}, {"k", "0"}}).status == 400, "k=0 not 400");
    const auto unknown = svc.most_similar({{"w", "ωωω"}});
    o.require(unknown.status == 404 && json::parse(unknown.body)["word"] == "ωωω", "unknown word not 404");
    o.require(svc.compare("{oops").status == 400, "malformed body not 400");
    o.require(svc.map({{"n", "1"}}).status == 400, "n out of range not 400");
    o.require(svc.map({{"n", "10"}, {"k", "11"}}).status == 400, "k > n not 400");
    if (o.pass) o.detail = "6 endpoints, 6 error cases, no static assets";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"ingestion fixtures match goldens", ingestion},
        {"dedup ratio 0.75 and idempotent", dedup},
        {"n-gram tables equal brute force", ngrams},
        {"subword n-grams and hashing", subwords},
        {"gradient checks", gradients},
        {"training signal on two topics", training_signal},
        {"query oracles", queries},
        {"vector format round trip", vector_format},
        {"visualization", viz_checks},
        {"explorer service", service_api},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failures += o.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
