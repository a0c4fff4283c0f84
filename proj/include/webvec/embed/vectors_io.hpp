#pragma once

#include "webvec/embed/model.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::embed {

/// Words with one dense vector each, in file order.
struct WordVectors {
    std::size_t dim = 0;
    std::vector<std::string> words;
    std::vector<float> data;  ///< words.size() x dim, row-major

    std::span<const float> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
    bool operator==(const WordVectors&) const = default;
};

/// Composed input vector of every vocabulary word, in vocab order.
WordVectors word_vectors(const Model& model);

/// Text format: header "<count> <dim>", then "<word> v1 ... vdim" per line,
/// values in shortest round-trip decimal form, LF line ends.
std::string format_vectors(const WordVectors& vectors);
void write_vectors(const WordVectors& vectors, const std::filesystem::path& path);
void save_vectors(const Model& model, const std::filesystem::path& path);

/// Inverse of format_vectors. Throws FormatError naming the offending line.
WordVectors parse_vectors(std::string_view text, const std::string& source = "<string>");
WordVectors read_vectors(const std::filesystem::path& path);

}  // namespace webvec::embed
