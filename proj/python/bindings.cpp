#include "webvec/corpus/dedup.hpp"
#include "webvec/corpus/ngrams.hpp"
#include "webvec/embed/model.hpp"
#include "webvec/embed/subword.hpp"
#include "webvec/embed/train.hpp"
#include "webvec/embed/vectors_io.hpp"
#include "webvec/error.hpp"
#include "webvec/ingest/pipeline.hpp"
#include "webvec/ingest/warc.hpp"
#include "webvec/query/ops.hpp"
#include "webvec/query/store.hpp"
#include "webvec/viz/kmeans.hpp"
#include "webvec/viz/map.hpp"
#include "webvec/viz/tsne.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

namespace py = pybind11;
using namespace webvec;

namespace {

using Results = std::vector<std::pair<std::string, double>>;

Results to_pairs(const std::vector<query::QueryResult>& results) {
    Results out;
    out.reserve(results.size());
    for (const auto& r : results) out.emplace_back(r.word, r.score);
    return out;
}

viz::Points to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw UsageError("expected a 2-D array");
    viz::Points p(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), p.values.begin());
    return p;
}

py::array_t<double> to_array(const viz::Points& p) {
    py::array_t<double> out({p.n, p.dim});
    std::copy(p.values.begin(), p.values.end(), out.mutable_data());
    return out;
}

std::vector<corpus::Sentence> tokenize_all(const std::vector<std::string>& lines) {
    std::vector<corpus::Sentence> out;
    out.reserve(lines.size());
    for (const auto& l : lines) out.push_back(corpus::tokenize(l));
    return out;
}

}  // namespace

PYBIND11_MODULE(_webvec, m) {
    m.doc() = "Native core of the webvec toolkit";

    // Later registrations take precedence, so the base class goes first.
    const auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", error.ptr());
    py::register_exception<UsageError>(m, "UsageError", error.ptr());
    py::register_exception<FormatError>(m, "FormatError", error.ptr());
    py::register_exception<NoSignalError>(m, "NoSignalError", error.ptr());
    py::register_exception<UnknownWordError>(m, "UnknownWordError", PyExc_KeyError);
    py::register_exception<UndefinedSimilarityError>(m, "UndefinedSimilarityError", PyExc_ValueError);

    // ingestion
    m.def("clean_html",
          [](const std::string& html, const std::string& script) {
              ingest::CleanOptions o;
              o.script = ingest::ScriptRanges::parse(script);
              return ingest::html_to_sentences(html, o);
          },
          py::arg("html"), py::arg("script") = "greek", "Sentences of a decoded HTML page.");
    m.def("filter_script",
          [](const std::string& text, const std::string& script) {
              return ingest::filter_script(text, ingest::ScriptRanges::parse(script));
          },
          py::arg("text"), py::arg("script") = "greek");
    m.def("segment_sentences", &ingest::segment_sentences, py::arg("text"));
    m.def("extract_warc",
          [](const std::filesystem::path& path) {
              std::ifstream in(path, std::ios::binary);
              if (!in) throw IoError("cannot open " + path.string());
              ingest::WarcStats stats;
              py::list docs;
              for (const auto& raw : ingest::read_warc(in, &stats)) {
                  const auto doc = ingest::clean_document(raw);
                  docs.append(py::dict(py::arg("url") = doc.url, py::arg("domain") = doc.domain,
                                       py::arg("sentences") = doc.sentences));
              }
              py::dict s(py::arg("records") = stats.records, py::arg("documents") = stats.documents,
                         py::arg("skipped") = stats.skipped, py::arg("errors") = stats.errors);
              return py::make_tuple(docs, s);
          },
          py::arg("path"), "(documents, stats) of one WARC file.");

    // corpus
    m.def("dedup_sentences",
          [](const std::vector<std::string>& lines) {
              corpus::DedupStats s;
              auto out = corpus::dedup_sentences(lines, &s);
              return py::make_tuple(out, s.reduction_ratio());
          },
          py::arg("lines"), "(unique lines, sentence reduction ratio).");
    m.def("count_ngrams",
          [](const std::vector<std::string>& lines, unsigned n, unsigned threads) {
              const auto sentences = tokenize_all(lines);
              const auto table = threads > 1 ? corpus::count_ngrams_parallel(sentences, n, threads)
                                             : corpus::count_ngrams(sentences, n);
              return std::map<std::string, std::uint64_t>(table.counts.begin(), table.counts.end());
          },
          py::arg("lines"), py::arg("n"), py::arg("threads") = 1);

    // subwords
    m.def("char_ngrams", &embed::char_ngrams, py::arg("word"), py::arg("nmin") = 3, py::arg("nmax") = 6);
    m.def("hash_subword", &embed::hash_subword, py::arg("ngram"), py::arg("buckets"));
    m.def("fnv1a32", [](py::bytes b) { return embed::fnv1a32(std::string(b)); }, py::arg("data"));

    // training
    py::class_<embed::TrainingConfig>(m, "TrainingConfig")
        .def(py::init<>())
        .def_readwrite("dim", &embed::TrainingConfig::dim)
        .def_property(
            "mode", [](const embed::TrainingConfig& c) { return std::string(embed::mode_name(c.mode)); },
            [](embed::TrainingConfig& c, const std::string& s) { c.mode = embed::parse_mode(s); })
        .def_readwrite("min_count", &embed::TrainingConfig::min_count)
        .def_readwrite("negatives", &embed::TrainingConfig::negatives)
        .def_readwrite("window", &embed::TrainingConfig::window)
        .def_readwrite("epochs", &embed::TrainingConfig::epochs)
        .def_readwrite("lr", &embed::TrainingConfig::lr0)
        .def_readwrite("buckets", &embed::TrainingConfig::buckets)
        .def_readwrite("nmin", &embed::TrainingConfig::nmin)
        .def_readwrite("nmax", &embed::TrainingConfig::nmax)
        .def_readwrite("sample", &embed::TrainingConfig::subsample_t)
        .def_readwrite("threads", &embed::TrainingConfig::threads)
        .def_readwrite("seed", &embed::TrainingConfig::seed);

    py::class_<embed::Model, std::shared_ptr<embed::Model>>(m, "Model")
        .def_property_readonly("words",
                               [](const embed::Model& model) {
                                   std::vector<std::string> w;
                                   for (const auto& e : model.vocab().entries()) w.push_back(e.word);
                                   return w;
                               })
        .def_property_readonly("dim", &embed::Model::dim)
        .def("vector", &embed::Model::compose_input, py::arg("word"))
        .def("save", &embed::Model::save, py::arg("path"))
        .def("save_vectors", [](const embed::Model& model, const std::filesystem::path& p) { embed::save_vectors(model, p); },
             py::arg("path"))
        .def_static("load", [](const std::filesystem::path& p) { return std::make_shared<embed::Model>(embed::Model::load(p)); },
                    py::arg("path"));

    m.def("train",
          [](const std::vector<std::string>& lines, const embed::TrainingConfig& config) {
              const auto sentences = tokenize_all(lines);
              embed::TrainingLog log;
              std::shared_ptr<embed::Model> model;
              {
                  py::gil_scoped_release release;
                  model = std::make_shared<embed::Model>(embed::train(sentences, config, &log));
              }
              return py::make_tuple(model, log.epoch_mean_loss);
          },
          py::arg("lines"), py::arg("config"), "(model, per-epoch mean loss).");

    // queries
    py::class_<query::EmbeddingStore, std::shared_ptr<query::EmbeddingStore>>(m, "EmbeddingStore")
        .def(py::init([](const std::vector<std::string>& words,
                         const py::array_t<float, py::array::c_style | py::array::forcecast>& vectors) {
                 if (vectors.ndim() != 2 || static_cast<std::size_t>(vectors.shape(0)) != words.size())
                     throw UsageError("vectors must be a len(words) x dim array");
                 embed::WordVectors wv;
                 wv.dim = static_cast<std::size_t>(vectors.shape(1));
                 wv.words = words;
                 wv.data.assign(vectors.data(), vectors.data() + vectors.size());
                 return std::make_shared<query::EmbeddingStore>(std::move(wv));
             }),
             py::arg("words"), py::arg("vectors"))
        .def_static("from_model",
                    [](std::shared_ptr<embed::Model> model) {
                        return std::make_shared<query::EmbeddingStore>(query::EmbeddingStore::from_model(model));
                    },
                    py::arg("model"))
        .def("__len__", &query::EmbeddingStore::size)
        .def_property_readonly("dim", &query::EmbeddingStore::dim)
        .def_property_readonly("words", &query::EmbeddingStore::words)
        .def("vector", &query::EmbeddingStore::resolve, py::arg("word"));

    m.def("load_vectors",
          [](const std::filesystem::path& p) { return std::make_shared<query::EmbeddingStore>(query::load_vectors(p)); },
          py::arg("path"));
    m.def("cosine",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              return query::cosine(std::span<const double>(a), std::span<const double>(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("most_similar",
          [](const query::EmbeddingStore& s, const std::string& w, std::size_t k) {
              return to_pairs(query::most_similar(s, w, k));
          },
          py::arg("store"), py::arg("word"), py::arg("k") = 10);
    m.def("analogy",
          [](const query::EmbeddingStore& s, const std::string& a, const std::string& b, const std::string& c,
             std::size_t k) { return to_pairs(query::analogy(s, a, b, c, k)); },
          py::arg("store"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("k") = 5);
    m.def("compare_groups",
          [](const query::EmbeddingStore& store, const std::vector<std::string>& g1, const std::vector<std::string>& g2) {
              return query::compare_groups(store, g1, g2);
          },
          py::arg("store"), py::arg("group1"), py::arg("group2"));
    m.def("spell_suggest",
          [](const query::EmbeddingStore& s, const std::string& token, std::size_t k) {
              return to_pairs(query::spell_suggest(s, token, k));
          },
          py::arg("store"), py::arg("token"), py::arg("k") = 5);
    m.def("levenshtein", &query::levenshtein, py::arg("a"), py::arg("b"));

    // visualization
    m.def("tsne",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, double perplexity,
             unsigned iterations) {
              viz::ProjectionConfig c;
              c.perplexity = perplexity;
              c.iterations = iterations;
              const auto points = to_points(data);
              viz::TsneResult r;
              {
                  py::gil_scoped_release release;
                  r = viz::tsne(points, c);
              }
              return py::make_tuple(to_array(r.coords), r.final_kl);
          },
          py::arg("data"), py::arg("perplexity") = 30.0, py::arg("iterations") = 1000, "(coords, final KL).");
    m.def("kmeans",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, std::size_t k,
             std::uint64_t seed) {
              const auto r = viz::kmeans(to_points(data), k, seed);
              return py::make_tuple(r.assignment, to_array(r.centroids), r.inertia_trace);
          },
          py::arg("data"), py::arg("k"), py::arg("seed") = 0, "(assignment, centroids, inertia trace).");
    m.def("build_map",
          [](const query::EmbeddingStore& s, std::size_t n, std::size_t k, double perplexity, std::uint64_t seed) {
              viz::ProjectionConfig c;
              c.sample_size = n;
              c.perplexity = perplexity;
              c.seed = seed;
              const auto r = viz::build_map(s, k, c);
              py::list points;
              for (const auto& p : r.points) points.append(py::make_tuple(p.word, p.x, p.y, p.cluster));
              return py::make_tuple(points, r.kl);
          },
          py::arg("store"), py::arg("n") = 500, py::arg("k") = viz::kDefaultClusters, py::arg("perplexity") = 30.0,
          py::arg("seed") = 0, "([(word, x, y, cluster)], KL).");
}
