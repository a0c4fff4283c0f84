#include "webvec/ingest/boilerplate.hpp"

namespace webvec::ingest {

void classify_blocks(std::vector<TextBlock>& blocks, const BoilerplateRule& rule) {
    std::vector<bool> dense(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        dense[i] = b.word_count == 0 ||
                   static_cast<double>(b.link_word_count) / static_cast<double>(b.word_count) >
                       rule.max_link_density;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const bool prev = i == 0 || dense[i - 1];
        const bool next = i + 1 == blocks.size() || dense[i + 1];
        blocks[i].is_boilerplate =
            dense[i] || (blocks[i].word_count < rule.short_block_words && prev && next);
    }
}

std::vector<TextBlock> remove_boilerplate(std::vector<TextBlock> blocks, const BoilerplateRule& rule) {
    classify_blocks(blocks, rule);
    std::vector<TextBlock> kept;
    kept.reserve(blocks.size());
    for (auto& b : blocks) {
        if (!b.is_boilerplate) kept.push_back(std::move(b));
    }
    return kept;
}

}  // namespace webvec::ingest
