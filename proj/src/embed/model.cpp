#include "webvec/embed/model.hpp"

#include "webvec/embed/subword.hpp"
#include "webvec/error.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace webvec::embed {

namespace {

constexpr char kMagic[4] = {'W', 'V', 'M', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IoError("truncated model file");
    return value;
}

void put_string(std::ostream& out, std::string_view s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const auto n = get<std::uint32_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in) throw IoError("truncated model file");
    return s;
}

void put_matrix(std::ostream& out, const Matrix& m) {
    put<std::uint64_t>(out, m.rows());
    put<std::uint64_t>(out, m.cols());
    out.write(reinterpret_cast<const char*>(m.data().data()),
              static_cast<std::streamsize>(m.data().size() * sizeof(float)));
}

Matrix get_matrix(std::istream& in) {
    const auto rows = get<std::uint64_t>(in);
    const auto cols = get<std::uint64_t>(in);
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(float)));
    if (!in) throw IoError("truncated model file");
    return m;
}

}  // namespace

std::string_view mode_name(TrainingMode mode) noexcept {
    switch (mode) {
        case TrainingMode::kSkipgramSubword: return "skipgram";
        case TrainingMode::kCbowSubword: return "cbow";
        case TrainingMode::kSkipgramWord: return "skipgram-nosub";
    }
    return "skipgram";
}

TrainingMode parse_mode(std::string_view name) {
    if (name == "skipgram") return TrainingMode::kSkipgramSubword;
    if (name == "cbow") return TrainingMode::kCbowSubword;
    if (name == "skipgram-nosub") return TrainingMode::kSkipgramWord;
    throw UsageError("unknown training mode: " + std::string(name));
}

void TrainingConfig::validate() const {
    if (dim == 0) throw UsageError("dim must be at least 1");
    if (nmin > nmax) throw UsageError("minn must not exceed maxn");
    if (uses_subwords() && buckets == 0) throw UsageError("bucket count must be positive with subwords");
    if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw UsageError("learning rate must be positive");
    if (!(subsample_t >= 0.0)) throw UsageError("sample threshold must be non-negative");
}

std::vector<std::int32_t> SubwordSet::rows() const {
    std::vector<std::int32_t> out;
    out.reserve(ngram_rows.size() + 1);
    if (word_row) out.push_back(*word_row);
    out.insert(out.end(), ngram_rows.begin(), ngram_rows.end());
    return out;
}

Model::Model(corpus::Vocab vocab, TrainingConfig config, Matrix input, Matrix output)
    : vocab_(std::move(vocab)), config_(config), input_(std::move(input)), output_(std::move(output)) {
    index_rows();
}

void Model::index_rows() {
    word_rows_.clear();
    word_rows_.reserve(vocab_.size());
    for (std::size_t id = 0; id < vocab_.size(); ++id) word_rows_.push_back(subwords(vocab_[id].word).rows());
}

Model Model::initialize(corpus::Vocab vocab, const TrainingConfig& config) {
    config.validate();
    const std::size_t rows = vocab.size() + config.bucket_rows();
    Matrix input(rows, config.dim);
    Matrix output(vocab.size(), config.dim);
    std::mt19937_64 rng(config.seed);
    const double bound = 1.0 / static_cast<double>(config.dim);
    for (float& v : input.data()) v = static_cast<float>((2.0 * unit_uniform(rng) - 1.0) * bound);
    return Model(std::move(vocab), config, std::move(input), std::move(output));
}

SubwordSet Model::subwords(std::string_view word) const {
    SubwordSet set;
    set.word = std::string(word);
    set.word_row = vocab_.id(word);
    if (config_.uses_subwords() && !word.empty()) {
        const auto base = static_cast<std::int32_t>(vocab_.size());
        for (const auto& ng : char_ngrams(word, config_.nmin, config_.nmax))
            set.ngram_rows.push_back(base + static_cast<std::int32_t>(hash_subword(ng, config_.buckets)));
    }
    return set;
}

void mean_rows(const Matrix& m, std::span<const std::int32_t> rows, std::span<float> out) {
    std::vector<double> acc(m.cols(), 0.0);
    for (const auto r : rows) {
        const auto src = m.row(static_cast<std::size_t>(r));
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += src[j];
    }
    const double scale = rows.empty() ? 0.0 : 1.0 / static_cast<double>(rows.size());
    for (std::size_t j = 0; j < acc.size(); ++j) out[j] = static_cast<float>(acc[j] * scale);
}

std::vector<float> Model::compose_input(std::string_view word) const {
    const SubwordSet set = subwords(word);
    if (!set.word_row && set.ngram_rows.empty()) throw UnknownWordError(std::string(word));
    std::vector<float> out(dim());
    const auto rows = set.rows();
    mean_rows(input_, rows, out);
    return out;
}

void Model::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(kMagic, sizeof kMagic);
    put(out, kFormatVersion);
    put<std::uint64_t>(out, config_.dim);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(config_.mode));
    put<std::uint64_t>(out, config_.min_count);
    put<std::uint32_t>(out, config_.negatives);
    put<std::uint32_t>(out, config_.window);
    put<std::uint32_t>(out, config_.epochs);
    put<double>(out, config_.lr0);
    put<std::uint32_t>(out, config_.buckets);
    put<std::uint32_t>(out, config_.nmin);
    put<std::uint32_t>(out, config_.nmax);
    put<double>(out, config_.subsample_t);
    put<std::uint32_t>(out, config_.threads);
    put<std::uint64_t>(out, config_.seed);
    put<std::uint64_t>(out, vocab_.min_count());
    put<std::uint64_t>(out, vocab_.size());
    for (const auto& e : vocab_.entries()) {
        put_string(out, e.word);
        put<std::uint64_t>(out, e.count);
    }
    put_matrix(out, input_);
    put_matrix(out, output_);
    if (!out) throw IoError("write failed: " + path.string());
}

Model Model::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw IoError("not a model file: " + path.string());
    if (get<std::uint32_t>(in) != kFormatVersion) throw IoError("unsupported model version: " + path.string());
    TrainingConfig c;
    c.dim = get<std::uint64_t>(in);
    const auto mode = get<std::uint32_t>(in);
    if (mode > 2) throw IoError("bad training mode in " + path.string());
    c.mode = static_cast<TrainingMode>(mode);
    c.min_count = get<std::uint64_t>(in);
    c.negatives = get<std::uint32_t>(in);
    c.window = get<std::uint32_t>(in);
    c.epochs = get<std::uint32_t>(in);
    c.lr0 = get<double>(in);
    c.buckets = get<std::uint32_t>(in);
    c.nmin = get<std::uint32_t>(in);
    c.nmax = get<std::uint32_t>(in);
    c.subsample_t = get<double>(in);
    c.threads = get<std::uint32_t>(in);
    c.seed = get<std::uint64_t>(in);
    const auto min_count = get<std::uint64_t>(in);
    const auto n = get<std::uint64_t>(in);
    std::vector<corpus::VocabEntry> entries;
    entries.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::string word = get_string(in);
        entries.push_back({std::move(word), get<std::uint64_t>(in)});
    }
    Matrix input = get_matrix(in);
    Matrix output = get_matrix(in);
    if (input.rows() != n + c.bucket_rows() || output.rows() != n || input.cols() != c.dim ||
        output.cols() != c.dim)
        throw IoError("inconsistent matrix shapes in " + path.string());
    return Model(corpus::Vocab(std::move(entries), min_count), c, std::move(input), std::move(output));
}

}  // namespace webvec::embed
