#pragma once

#include "webvec/ingest/html.hpp"

#include <vector>

namespace webvec::ingest {

struct BoilerplateRule {
    double max_link_density = 0.33;
    std::size_t short_block_words = 10;
};

/// Two-pass shallow-feature classifier. Pass one marks blocks whose link
/// density exceeds the threshold. Pass two marks short blocks whose
/// neighbours were both marked in pass one (list ends count as marked).
/// Sets `is_boilerplate` on every block of `blocks`.
void classify_blocks(std::vector<TextBlock>& blocks, const BoilerplateRule& rule = {});

/// Content blocks only, in input order.
std::vector<TextBlock> remove_boilerplate(std::vector<TextBlock> blocks,
                                          const BoilerplateRule& rule = {});

}  // namespace webvec::ingest
