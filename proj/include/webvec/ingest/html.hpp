#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace webvec::ingest {

/// A run of text between block-level element boundaries.
struct TextBlock {
    std::string text;                 ///< entity-decoded, whitespace collapsed
    std::size_t word_count = 0;       ///< whitespace tokens of `text`
    std::size_t link_word_count = 0;  ///< tokens with any character inside <a>
    bool is_boilerplate = false;
};

/// Splits decoded HTML into text blocks. Script, style and comment content is
/// dropped. Blocks break at block-level tags and at runs of two or more
/// <br>; a single <br> is whitespace. Unknown tags are inline. Never throws on
/// malformed markup.
std::vector<TextBlock> extract_blocks(std::string_view html);

/// Decodes named and numeric character references.
std::string decode_entities(std::string_view text);

std::size_t count_words(std::string_view text) noexcept;

}  // namespace webvec::ingest
