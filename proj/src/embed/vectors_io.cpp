#include "webvec/embed/vectors_io.hpp"

#include "webvec/error.hpp"
#include "webvec/util/gzip.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>

namespace webvec::embed {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

WordVectors word_vectors(const Model& model) {
    WordVectors out;
    out.dim = model.dim();
    out.words.reserve(model.vocab().size());
    out.data.resize(model.vocab().size() * model.dim());
    for (std::size_t id = 0; id < model.vocab().size(); ++id) {
        out.words.push_back(model.vocab()[id].word);
        mean_rows(model.input(), model.word_rows(id), {out.data.data() + id * out.dim, out.dim});
    }
    return out;
}

std::string format_vectors(const WordVectors& vectors) {
    std::string out = std::to_string(vectors.words.size()) + " " + std::to_string(vectors.dim) + "\n";
    char buf[64];
    for (std::size_t i = 0; i < vectors.words.size(); ++i) {
        out += vectors.words[i];
        for (const float v : vectors.row(i)) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out += ' ';
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

void write_vectors(const WordVectors& vectors, const std::filesystem::path& path) {
    io::write_text(path, format_vectors(vectors));
}

void save_vectors(const Model& model, const std::filesystem::path& path) {
    write_vectors(word_vectors(model), path);
}

WordVectors parse_vectors(std::string_view text, const std::string& source) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }
    if (lines.empty()) throw FormatError(source, 1, "missing header");

    const auto header = split_spaces(lines[0]);
    std::size_t count = 0;
    WordVectors out;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], out.dim) ||
        out.dim == 0)
        throw FormatError(source, 1, "header must be '<count> <dim>'");

    out.words.reserve(count);
    out.data.reserve(count * out.dim);
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t line_no = i + 2;
        if (i + 1 >= lines.size()) throw FormatError(source, line_no, "expected a vector row, found end of file");
        const auto fields = split_spaces(lines[i + 1]);
        if (fields.size() != out.dim + 1)
            throw FormatError(source, line_no,
                              "expected word and " + std::to_string(out.dim) + " values, found " +
                                  std::to_string(fields.empty() ? 0 : fields.size() - 1) + " values");
        if (!seen.insert(fields[0]).second) throw FormatError(source, line_no, "duplicate word");
        out.words.emplace_back(fields[0]);
        for (std::size_t j = 1; j < fields.size(); ++j) {
            float v = 0.0f;
            if (!parse_number(fields[j], v) || !std::isfinite(v))
                throw FormatError(source, line_no, "bad number '" + std::string(fields[j]) + "'");
            out.data.push_back(v);
        }
    }
    for (std::size_t extra = count + 1; extra < lines.size(); ++extra) {
        if (!lines[extra].empty())
            throw FormatError(source, extra + 1, "more rows than the header declares");
    }
    return out;
}

WordVectors read_vectors(const std::filesystem::path& path) {
    return parse_vectors(io::read_file(path), path.string());
}

}  // namespace webvec::embed
