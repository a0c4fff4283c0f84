// Command-line front end for the corpus, training, query, map and serve stages.

#include "webvec/corpus/dedup.hpp"
#include "webvec/corpus/ngrams.hpp"
#include "webvec/corpus/vocab.hpp"
#include "webvec/embed/model.hpp"
#include "webvec/embed/train.hpp"
#include "webvec/embed/vectors_io.hpp"
#include "webvec/error.hpp"
#include "webvec/ingest/pipeline.hpp"
#include "webvec/query/ops.hpp"
#include "webvec/query/store.hpp"
#include "webvec/service/explorer.hpp"
#include "webvec/util/gzip.hpp"
#include "webvec/viz/map.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

namespace fs = std::filesystem;
using namespace webvec;

namespace {

struct QueryArgs {
    std::string vectors;
    std::string model;
    std::string w1, w2, w, a, b, c, token, file;
    std::size_t k = 10;
};

std::shared_ptr<const query::EmbeddingStore> open_store(const std::string& vectors, const std::string& model) {
    if (!model.empty()) {
        auto m = std::make_shared<const embed::Model>(embed::Model::load(model));
        return std::make_shared<const query::EmbeddingStore>(query::EmbeddingStore::from_model(std::move(m)));
    }
    if (vectors.empty()) throw UsageError("--vectors or --model is required");
    return std::make_shared<const query::EmbeddingStore>(query::load_vectors(vectors));
}

void print_results(const std::vector<query::QueryResult>& results) {
    for (const auto& r : results) std::printf("%s\t%.6f\n", r.word.c_str(), r.score);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Web-corpus word embedding toolkit"};
    app.require_subcommand(1);

    // extract
    std::string extract_in, extract_out, extract_script = "greek";
    unsigned extract_jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* extract = app.add_subcommand("extract", "WARC files to per-domain sentence files");
    extract->add_option("--input", extract_in, "directory of .warc/.warc.gz files")->required();
    extract->add_option("--out", extract_out, "output directory")->required();
    extract->add_option("--script", extract_script, "greek, latin or hex ranges like 0370-03FF");
    extract->add_option("--jobs", extract_jobs)->check(CLI::PositiveNumber);

    // dedup
    std::string dedup_in, dedup_out;
    auto* dedup = app.add_subcommand("dedup", "two-stage exact sentence deduplication");
    dedup->add_option("--in", dedup_in, "directory of per-domain corpus files")->required();
    dedup->add_option("--out", dedup_out, "output corpus file")->required();

    // ngrams
    std::string ngrams_in, ngrams_out;
    unsigned ngrams_n = 1, ngrams_threads = 1;
    auto* ngrams = app.add_subcommand("ngrams", "count n-grams of a corpus");
    ngrams->add_option("--in", ngrams_in)->required();
    ngrams->add_option("--n", ngrams_n)->check(CLI::Range(1, 3))->required();
    ngrams->add_option("--out", ngrams_out)->required();
    ngrams->add_option("--threads", ngrams_threads)->check(CLI::PositiveNumber);

    // vocab
    std::string vocab_in, vocab_out;
    std::uint64_t vocab_min = 11;
    auto* vocab = app.add_subcommand("vocab", "vocabulary from a unigram table");
    vocab->add_option("--unigrams", vocab_in)->required();
    vocab->add_option("--min-count", vocab_min);
    vocab->add_option("--out", vocab_out)->required();

    // train
    embed::TrainingConfig cfg;
    std::string train_in, train_out, train_mode = "skipgram", train_model_out;
    auto* train = app.add_subcommand("train", "train word vectors");
    train->add_option("--in", train_in)->required();
    train->add_option("--out", train_out, "vector text file")->required();
    train->add_option("--mode", train_mode)->check(CLI::IsMember({"skipgram", "cbow", "skipgram-nosub"}));
    train->add_option("--dim", cfg.dim);
    train->add_option("--min-count", cfg.min_count);
    train->add_option("--threads", cfg.threads);
    train->add_option("--neg", cfg.negatives);
    train->add_option("--window", cfg.window);
    train->add_option("--epochs", cfg.epochs);
    train->add_option("--lr", cfg.lr0);
    train->add_option("--bucket", cfg.buckets);
    train->add_option("--minn", cfg.nmin);
    train->add_option("--maxn", cfg.nmax);
    train->add_option("--sample", cfg.subsample_t);
    train->add_option("--seed", cfg.seed);
    train->add_option("--save-model", train_model_out, "also write the binary model (needed for OOV queries)");

    // query
    QueryArgs q;
    auto* query_cmd = app.add_subcommand("query", "similarity, neighbors, analogy, spelling, evaluation");
    query_cmd->require_subcommand(1);
    query_cmd->add_option("--vectors", q.vectors, "vector text file");
    query_cmd->add_option("--model", q.model, "binary model; enables subword composition");
    auto* q_sim = query_cmd->add_subcommand("similarity");
    q_sim->add_option("w1", q.w1)->required();
    q_sim->add_option("w2", q.w2)->required();
    auto* q_nb = query_cmd->add_subcommand("neighbors");
    q_nb->add_option("w", q.w)->required();
    q_nb->add_option("--k", q.k);
    auto* q_an = query_cmd->add_subcommand("analogy");
    q_an->add_option("a", q.a)->required();
    q_an->add_option("b", q.b)->required();
    q_an->add_option("c", q.c)->required();
    q_an->add_option("--k", q.k)->default_val(5);
    auto* q_sp = query_cmd->add_subcommand("spell");
    q_sp->add_option("token", q.token)->required();
    q_sp->add_option("--k", q.k)->default_val(5);
    auto* q_ev = query_cmd->add_subcommand("eval");
    q_ev->add_option("--file", q.file)->required();
    for (auto* sub : {q_sim, q_nb, q_an, q_sp, q_ev}) {
        sub->add_option("--vectors", q.vectors);
        sub->add_option("--model", q.model);
    }

    // map
    std::string map_vectors, map_out;
    std::size_t map_k = viz::kDefaultClusters;
    viz::ProjectionConfig proj;
    auto* map = app.add_subcommand("map", "t-SNE projection plus k-means clusters");
    map->add_option("--vectors", map_vectors)->required();
    map->add_option("--sample", proj.sample_size);
    map->add_option("--k", map_k);
    map->add_option("--perplexity", proj.perplexity);
    map->add_option("--iterations", proj.iterations);
    map->add_option("--seed", proj.seed);
    map->add_option("--out", map_out)->required();

    // serve
    std::string serve_vectors, serve_model, serve_bind = "127.0.0.1:7000", serve_static;
    service::ServiceConfig scfg;
    auto* serve = app.add_subcommand("serve", "JSON query service");
    serve->add_option("--vectors", serve_vectors);
    serve->add_option("--model", serve_model, "binary model; enables subword composition");
    serve->add_option("--bind", serve_bind);
    serve->add_option("--static", serve_static, "directory served at /");
    serve->add_option("--max-sample", scfg.max_sample);
    serve->add_option("--seed", scfg.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) {
            ingest::CleanOptions options;
            options.script = ingest::ScriptRanges::parse(extract_script);
            const auto files = ingest::list_warc_files(extract_in);
            fs::create_directories(extract_out);
            for (const auto& r : ingest::extract_warc_files(files, extract_out, extract_jobs, options))
                std::cout << r.file.string() << '\t' << r.stats.records << '\t' << r.stats.documents << '\t'
                          << r.stats.errors << '\n';
        } else if (*dedup) {
            const auto report = corpus::dedup_corpus_dir(dedup_in, dedup_out);
            const auto& s = report.overall;
            std::cout << s.total_sentences << '\t' << s.unique_sentences << '\t' << s.reduction_ratio() << '\n';
            std::cerr << "bytes\t" << s.total_bytes << '\t' << s.unique_bytes << '\t' << s.byte_reduction_ratio()
                      << '\n';
        } else if (*ngrams) {
            corpus::write_ngrams(corpus::count_ngrams_file(ngrams_in, ngrams_n, ngrams_threads), ngrams_out);
        } else if (*vocab) {
            corpus::write_vocab(corpus::build_vocab(corpus::read_ngrams(vocab_in), vocab_min), vocab_out);
        } else if (*train) {
            cfg.mode = embed::parse_mode(train_mode);
            embed::TrainingLog log;
            const auto model = embed::train_file(train_in, cfg, &log);
            for (std::size_t e = 0; e < log.epoch_mean_loss.size(); ++e)
                std::cerr << "epoch " << e + 1 << "\tloss " << log.epoch_mean_loss[e] << '\n';
            embed::save_vectors(model, train_out);
            if (!train_model_out.empty()) model.save(train_model_out);
        } else if (*query_cmd) {
            const auto store = open_store(q.vectors, q.model);
            if (*q_sim) {
                const auto v1 = store->resolve(q.w1);
                const auto v2 = store->resolve(q.w2);
                std::printf("%.6f\n", query::cosine(std::span<const double>(v1), std::span<const double>(v2)));
            } else if (*q_nb) {
                print_results(query::most_similar(*store, q.w, q.k));
            } else if (*q_an) {
                print_results(query::analogy(*store, q.a, q.b, q.c, q.k));
            } else if (*q_sp) {
                print_results(query::spell_suggest(*store, q.token, q.k));
            } else if (*q_ev) {
                const auto r = query::evaluate_questions_file(*store, q.file);
                std::cout << "answered\t" << r.answered << "\ncorrect\t" << r.correct << "\nskipped\t" << r.skipped
                          << "\nmalformed\t" << r.malformed << "\naccuracy\t" << r.accuracy() << '\n';
            }
        } else if (*map) {
            const auto store = query::load_vectors(map_vectors);
            io::write_text(map_out, viz::format_map_tsv(viz::build_map(store, map_k, proj)));
        } else if (*serve) {
            std::tie(scfg.host, scfg.port) = service::parse_bind(serve_bind);
            if (!serve_static.empty()) scfg.static_dir = serve_static;
            service::ExplorerService svc(open_store(serve_vectors, serve_model), scfg);
            std::cerr << "listening on " << scfg.host << ':' << scfg.port << '\n';
            svc.serve();
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
