#pragma once

#include "webvec/ingest/boilerplate.hpp"
#include "webvec/ingest/script.hpp"
#include "webvec/ingest/warc.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace webvec::ingest {

struct CleanDocument {
    std::string url;
    std::string domain;
    std::vector<std::string> sentences;  ///< lowercased, script characters and single spaces
    bool decoding_replaced = false;      ///< undecodable bytes were replaced
};

struct CleanOptions {
    ScriptRanges script = ScriptRanges::greek();
    BoilerplateRule boilerplate;
    bool lowercase = true;
};

/// Decode, strip markup, drop boilerplate, filter script, segment, lowercase.
CleanDocument clean_document(const RawDocument& doc, const CleanOptions& options = {});

/// Sentences of a decoded HTML string (no encoding step).
std::vector<std::string> html_to_sentences(std::string_view html, const CleanOptions& options = {});

struct WarcFileResult {
    std::filesystem::path file;
    WarcStats stats;
    std::size_t sentences = 0;
};

class DomainCorpusSink;

/// Streams one WARC file into the per-domain sink.
WarcFileResult extract_warc_file(const std::filesystem::path& warc, DomainCorpusSink& sink,
                                 const CleanOptions& options = {});

/// "*.warc" and "*.warc.gz" files under `dir`, sorted by path.
std::vector<std::filesystem::path> list_warc_files(const std::filesystem::path& dir);

/// Processes files on `jobs` worker threads. Results come back in input order.
std::vector<WarcFileResult> extract_warc_files(const std::vector<std::filesystem::path>& files,
                                               const std::filesystem::path& out_dir,
                                               unsigned jobs, const CleanOptions& options = {});

}  // namespace webvec::ingest
