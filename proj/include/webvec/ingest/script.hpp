#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace webvec::ingest {

/// The set of code point ranges that survive filtering.
class ScriptRanges {
public:
    using Range = std::pair<char32_t, char32_t>;  // inclusive

    ScriptRanges() = default;
    explicit ScriptRanges(std::vector<Range> ranges) : ranges_(std::move(ranges)) {}

    /// Greek and Coptic plus Greek Extended.
    static ScriptRanges greek();
    /// ASCII letters, Latin-1 letters, Latin Extended-A.
    static ScriptRanges latin();
    /// A preset name ("greek", "latin") or a list such as "0370-03FF,1F00-1FFF".
    static ScriptRanges parse(std::string_view text);

    bool contains(char32_t cp) const noexcept;
    const std::vector<Range>& ranges() const noexcept { return ranges_; }

private:
    std::vector<Range> ranges_;
};

/// Replaces every character outside the allow-set with a space, collapses
/// space runs and trims. Allow-set: the script ranges, space, and the
/// terminators '.', '!', ';' and LF. Ano teleia (U+0387) is removed; the Greek
/// question mark (U+037E) becomes ';'.
std::string filter_script(std::string_view text, const ScriptRanges& script = ScriptRanges::greek());

/// Splits filtered text on LF and on '.', '!', ';'. Sentences are trimmed,
/// space runs collapsed and empty results dropped.
std::vector<std::string> segment_sentences(std::string_view text);

}  // namespace webvec::ingest
