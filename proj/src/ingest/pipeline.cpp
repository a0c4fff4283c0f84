#include "webvec/ingest/pipeline.hpp"

#include "webvec/error.hpp"
#include "webvec/ingest/corpus_writer.hpp"
#include "webvec/ingest/encoding.hpp"
#include "webvec/ingest/html.hpp"
#include "webvec/util/utf8.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

namespace webvec::ingest {

std::vector<std::string> html_to_sentences(std::string_view html, const CleanOptions& options) {
    std::vector<std::string> out;
    for (const auto& block : remove_boilerplate(extract_blocks(html), options.boilerplate)) {
        for (auto& sentence : segment_sentences(filter_script(block.text, options.script))) {
            out.push_back(options.lowercase ? utf8::to_lower(sentence) : std::move(sentence));
        }
    }
    return out;
}

CleanDocument clean_document(const RawDocument& doc, const CleanOptions& options) {
    CleanDocument clean;
    clean.url = doc.url;
    clean.domain = doc.domain;
    std::optional<std::string_view> declared;
    if (doc.declared_charset) declared = *doc.declared_charset;
    const Encoding enc = detect_encoding(doc.body, declared);
    DecodedText decoded = decode(doc.body, enc);
    clean.decoding_replaced = decoded.replaced;
    clean.sentences = html_to_sentences(decoded.text, options);
    return clean;
}

WarcFileResult extract_warc_file(const std::filesystem::path& warc, DomainCorpusSink& sink,
                                 const CleanOptions& options) {
    std::ifstream in(warc, std::ios::binary);
    if (!in) throw IoError("cannot open: " + warc.string());
    WarcReader reader(in);
    WarcFileResult result;
    result.file = warc;
    // Buffer per domain so each file appends one gzip member per domain.
    std::map<std::string, std::vector<std::string>> by_domain;
    while (auto doc = reader.next()) {
        CleanDocument clean = clean_document(*doc, options);
        auto& bucket = by_domain[clean.domain];
        result.sentences += clean.sentences.size();
        std::move(clean.sentences.begin(), clean.sentences.end(), std::back_inserter(bucket));
    }
    for (const auto& [domain, sentences] : by_domain) sink.append(domain, sentences);
    result.stats = reader.stats();
    return result;
}

std::vector<std::filesystem::path> list_warc_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.ends_with(".warc") || name.ends_with(".warc.gz")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<WarcFileResult> extract_warc_files(const std::vector<std::filesystem::path>& files,
                                               const std::filesystem::path& out_dir, unsigned jobs,
                                               const CleanOptions& options) {
    std::filesystem::create_directories(out_dir);
    DomainCorpusSink sink(out_dir);
    std::vector<WarcFileResult> results(files.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            try {
                results[i] = extract_warc_file(files[i], sink, options);
            } catch (...) {
                std::lock_guard guard(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, files.size()))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace webvec::ingest
