#include "webvec/corpus/dedup.hpp"

#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"

#include <algorithm>

namespace webvec::corpus {

namespace {

std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Multiplicative hash over 8-byte words, independent of FNV.
std::uint64_t word_hash(std::string_view s) noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
    std::size_t i = 0;
    for (; i + 8 <= s.size(); i += 8) {
        std::uint64_t w = 0;
        for (std::size_t j = 0; j < 8; ++j) w |= std::uint64_t(static_cast<unsigned char>(s[i + j])) << (8 * j);
        h = mix64(h ^ w) * 0x9fb21c651e98df25ULL;
    }
    std::uint64_t tail = 0;
    for (std::size_t j = 0; i + j < s.size(); ++j)
        tail |= std::uint64_t(static_cast<unsigned char>(s[i + j])) << (8 * j);
    return mix64(h ^ tail);
}

double ratio(std::uint64_t unique, std::uint64_t total) noexcept {
    return total == 0 ? 0.0 : 1.0 - static_cast<double>(unique) / static_cast<double>(total);
}

void add(DedupStats& into, const DedupStats& from) {
    into.total_sentences += from.total_sentences;
    into.unique_sentences += from.unique_sentences;
    into.total_bytes += from.total_bytes;
    into.unique_bytes += from.unique_bytes;
}

}  // namespace

double DedupStats::reduction_ratio() const noexcept { return ratio(unique_sentences, total_sentences); }

double DedupStats::byte_reduction_ratio() const noexcept { return ratio(unique_bytes, total_bytes); }

Digest128 digest128(std::string_view s) noexcept { return {fnv1a64(s), word_hash(s)}; }

bool SentenceDeduper::insert(std::string_view sentence) {
    const std::uint64_t bytes = sentence.size() + 1;
    ++stats_.total_sentences;
    stats_.total_bytes += bytes;
    const auto [it, fresh] = seen_.try_emplace(digest128(sentence), sentence);
    bool is_new = fresh;
    if (!fresh && it->second != sentence) is_new = collided_.emplace(sentence).second;
    if (is_new) {
        ++stats_.unique_sentences;
        stats_.unique_bytes += bytes;
    }
    return is_new;
}

void SentenceDeduper::clear() {
    seen_.clear();
    collided_.clear();
    stats_ = {};
}

std::vector<std::string> dedup_sentences(std::span<const std::string> lines, DedupStats* stats) {
    SentenceDeduper deduper;
    std::vector<std::string> out;
    for (const auto& line : lines) {
        if (deduper.insert(line)) out.push_back(line);
    }
    if (stats != nullptr) *stats = deduper.stats();
    return out;
}

CorpusDedupReport dedup_corpus_dir(const std::filesystem::path& in_dir,
                                   const std::filesystem::path& out_file) {
    if (!std::filesystem::is_directory(in_dir)) throw IoError("not a directory: " + in_dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && (name.ends_with(".txt") || name.ends_with(".txt.gz")))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    CorpusDedupReport report;
    SentenceDeduper global;
    std::string output;
    for (const auto& file : files) {
        SentenceDeduper domain;
        for (const auto& line : io::read_lines(file)) {
            if (!domain.insert(line)) continue;
            if (global.insert(line)) {
                output += line;
                output += '\n';
            }
        }
        add(report.per_domain, domain.stats());
    }
    report.global = global.stats();
    report.overall = {report.per_domain.total_sentences, report.global.unique_sentences,
                      report.per_domain.total_bytes, report.global.unique_bytes};
    io::write_text(out_file, output);
    return report;
}

}  // namespace webvec::corpus
