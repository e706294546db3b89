#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "zwise/fuzzy.hpp"

namespace zwise {

// Marker phrases for one component, already tokenized. Loaded from plain text
// files (one lowercase phrase per line, # comments) or from the built-in
// seeds; either way phrases are lowercased and deduplicated on construction.
class Lexicon {
public:
    Lexicon(Component component, std::vector<std::string> phrases);

    static Lexicon from_file(Component component, const std::string& path);
    // The exemplar phrases shipped with the tool, also mirrored in
    // data/lexicons/. Editing the files changes runs that point at them;
    // the built-ins keep path-free runs working.
    static Lexicon builtin_seed(Component component);

    Component component() const { return component_; }
    const std::vector<std::string>& phrases() const { return phrases_; }
    const std::vector<std::vector<std::string>>& marker_tokens() const { return marker_tokens_; }
    std::size_t longest_marker() const { return longest_; }

private:
    Component component_;
    std::vector<std::string> phrases_;
    std::vector<std::vector<std::string>> marker_tokens_;
    std::size_t longest_ = 0;
};

// Lowercases, splits on whitespace, strips leading/trailing punctuation from
// each token. Internal apostrophes survive ("don't" stays one token);
// stopwords are deliberately retained, the markers are built from them.
std::vector<std::string> tokenize(std::string_view text);

// Greedy left-to-right scan. At each position the longest matching marker
// claims its span and contributes its token length to the count; the scan
// resumes after the span, so spans never overlap.
std::size_t count_markers(const std::vector<std::string>& tokens, const Lexicon& lexicon);

// x = min(1, n/N). An empty transcript (N = 0) scores 0; the caller is
// responsible for flagging it, see ParticipantResult::warnings.
double component_score(std::size_t n, std::size_t total_tokens);

} // namespace zwise
