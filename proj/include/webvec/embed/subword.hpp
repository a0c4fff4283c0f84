#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::embed {

inline constexpr std::string_view kBeginOfWord = "<";
inline constexpr std::string_view kEndOfWord = ">";

/// Character n-grams of "<word>" with lengths nmin..nmax, grouped by length
/// (shortest first) and left to right within a length. Lengths count code
/// points. The whole padded token is never included.
std::vector<std::string> char_ngrams(std::string_view word, unsigned nmin, unsigned nmax);

/// 32-bit FNV-1a over the UTF-8 bytes.
std::uint32_t fnv1a32(std::string_view bytes) noexcept;

/// Bucket of a subword: fnv1a32(ngram) mod buckets. `buckets` must be >= 1.
std::uint32_t hash_subword(std::string_view ngram, std::uint32_t buckets);

}  // namespace webvec::embed
