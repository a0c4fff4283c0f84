#include "webvec/corpus/ngrams.hpp"

#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <thread>

namespace webvec::corpus {

namespace {

void check_n(unsigned n) {
    if (n < 1 || n > 3) throw UsageError("n-gram order must be 1, 2 or 3, got " + std::to_string(n));
}

void count_into(const Sentence& tokens, unsigned n, NgramTable& table) {
    if (tokens.size() < n) return;
    std::string key;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        key = tokens[i];
        for (unsigned j = 1; j < n; ++j) {
            key += ' ';
            key += tokens[i + j];
        }
        ++table.counts[key];
    }
}

std::size_t count_spaces(std::string_view s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), ' ')); }

}  // namespace

Sentence tokenize(std::string_view line) {
    Sentence out;
    std::size_t i = 0;
    const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (i < line.size()) {
        while (i < line.size() && space(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !space(line[i])) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

void merge(NgramTable& into, const NgramTable& from) {
    if (into.n != from.n) throw UsageError("cannot merge n-gram tables of different order");
    for (const auto& [key, count] : from.counts) into.counts[key] += count;
}

NgramTable count_ngrams(std::span<const Sentence> sentences, unsigned n) {
    check_n(n);
    NgramTable table{n, {}};
    for (const auto& s : sentences) count_into(s, n, table);
    return table;
}

NgramTable count_ngrams_parallel(std::span<const Sentence> sentences, unsigned n, unsigned threads) {
    check_n(n);
    threads = std::max(1u, threads);
    if (threads == 1) return count_ngrams(sentences, n);

    // Each worker counts a slice into its own shard set; shards are keyed by
    // hash so the final merge touches disjoint maps.
    const unsigned shards = threads;
    std::vector<std::vector<NgramTable>> partial(threads, std::vector<NgramTable>(shards, NgramTable{n, {}}));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                const std::size_t begin = sentences.size() * t / threads;
                const std::size_t end = sentences.size() * (t + 1) / threads;
                NgramTable local{n, {}};
                for (std::size_t i = begin; i < end; ++i) count_into(sentences[i], n, local);
                for (auto& [key, count] : local.counts)
                    partial[t][std::hash<std::string>{}(key) % shards].counts[key] += count;
            });
        }
    }
    std::vector<NgramTable> merged(shards, NgramTable{n, {}});
    {
        std::vector<std::jthread> pool;
        for (unsigned s = 0; s < shards; ++s) {
            pool.emplace_back([&, s] {
                for (unsigned t = 0; t < threads; ++t) merge(merged[s], partial[t][s]);
            });
        }
    }
    NgramTable out{n, {}};
    for (auto& shard : merged) out.counts.merge(shard.counts);
    return out;
}

NgramTable count_ngrams_file(const std::filesystem::path& corpus, unsigned n, unsigned threads) {
    check_n(n);
    std::vector<Sentence> sentences;
    for (const auto& line : io::read_lines(corpus)) sentences.push_back(tokenize(line));
    return count_ngrams_parallel(sentences, n, threads);
}

std::vector<std::pair<std::string, std::uint64_t>> sorted_rows(const NgramTable& table) {
    std::vector<std::pair<std::string, std::uint64_t>> rows(table.counts.begin(), table.counts.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return rows;
}

std::string format_ngrams(const NgramTable& table) {
    std::string out;
    for (const auto& [key, count] : sorted_rows(table)) {
        out += key;
        out += '\t';
        out += std::to_string(count);
        out += '\n';
    }
    return out;
}

void write_ngrams(const NgramTable& table, const std::filesystem::path& out) {
    io::write_text(out, format_ngrams(table));
}

NgramTable parse_ngrams(std::string_view text, const std::string& source) {
    NgramTable table;
    bool first = true;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        ++line_no;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;

        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw FormatError(source, line_no, "missing tab");
        const std::string_view key = line.substr(0, tab);
        const std::string_view count_text = line.substr(tab + 1);
        std::uint64_t count = 0;
        const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
        if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count_text.empty())
            throw FormatError(source, line_no, "count is not an unsigned integer");
        if (count == 0) throw FormatError(source, line_no, "count must be at least 1");
        if (key.empty() || key.front() == ' ' || key.back() == ' ' || key.find("  ") != std::string_view::npos)
            throw FormatError(source, line_no, "malformed n-gram");
        const auto n = static_cast<unsigned>(count_spaces(key) + 1);
        if (first) {
            if (n > 3) throw FormatError(source, line_no, "n-gram order above 3");
            table.n = n;
            first = false;
        } else if (n != table.n) {
            throw FormatError(source, line_no, "n-gram order differs from first row");
        }
        if (!table.counts.emplace(std::string(key), count).second)
            throw FormatError(source, line_no, "duplicate n-gram");
    }
    return table;
}

NgramTable read_ngrams(const std::filesystem::path& path) {
    return parse_ngrams(io::read_file(path), path.string());
}

}  // namespace webvec::corpus
