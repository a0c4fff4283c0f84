#include "webvec/embed/subword.hpp"

#include "webvec/error.hpp"
#include "webvec/util/utf8.hpp"

#include <algorithm>

namespace webvec::embed {

std::vector<std::string> char_ngrams(std::string_view word, unsigned nmin, unsigned nmax) {
    std::string padded;
    padded.reserve(word.size() + 2);
    padded += kBeginOfWord;
    padded += word;
    padded += kEndOfWord;

    // Byte offset of every character boundary, plus the end.
    std::vector<std::size_t> bounds;
    std::size_t pos = 0;
    while (pos < padded.size()) {
        bounds.push_back(pos);
        utf8::next(padded, pos);
    }
    const std::size_t chars = bounds.size();
    bounds.push_back(padded.size());

    std::vector<std::string> out;
    for (std::size_t len = std::max(1u, nmin); len <= nmax && len < chars; ++len) {
        for (std::size_t start = 0; start + len <= chars; ++start)
            out.push_back(padded.substr(bounds[start], bounds[start + len] - bounds[start]));
    }
    return out;
}

std::uint32_t fnv1a32(std::string_view bytes) noexcept {
    std::uint32_t h = 2166136261u;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    return h;
}

std::uint32_t hash_subword(std::string_view ngram, std::uint32_t buckets) {
    if (buckets == 0) throw UsageError("hash_subword: bucket count must be positive");
    return fnv1a32(ngram) % buckets;
}

}  // namespace webvec::embed
