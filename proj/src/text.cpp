#include "zwise/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "zwise/errors.hpp"

namespace zwise {

namespace {

bool is_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string normalize_token(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && is_punct(raw[b])) ++b;
    while (e > b && is_punct(raw[e - 1])) --e;
    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
    }
    return out;
}

// Seed phrases: the exemplars quoted for each component. The shipped
// data/lexicons/ files start from exactly this list.
const std::vector<std::string>& seed_phrases(Component c) {
    static const std::vector<std::string> pt = {
        "if i were in that situation", "i tried to see", "from another point of view",
        "i imagined myself", "i tried to understand"};
    static const std::vector<std::string> ref = {
        "i think", "i realized", "upon reflection", "i thought about",
        "i came to understand"};
    static const std::vector<std::string> pro = {
        "try to return it", "call the police", "help the person", "do the right thing",
        "save the child"};
    static const std::vector<std::string> rea = {
        "i feel bad", "i felt sorry", "it breaks my heart", "i would be sad",
        "my heart went out to them"};
    static const std::vector<std::string> ih = {
        "i might be wrong", "i don't know", "i could be mistaken", "maybe i am not sure",
        "it depends"};
    switch (c) {
        case Component::PT: return pt;
        case Component::Ref: return ref;
        case Component::Pro: return pro;
        case Component::REA: return rea;
        default: return ih;
    }
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) {
            std::string tok = normalize_token(text.substr(start, i - start));
            if (!tok.empty()) tokens.push_back(std::move(tok));
        }
    }
    return tokens;
}

Lexicon::Lexicon(Component component, std::vector<std::string> phrases)
    : component_(component) {
    if (phrases.empty()) {
        throw ConfigError("lexicon for " + std::string(to_string(component)) + " has no markers");
    }
    for (const auto& raw : phrases) {
        std::vector<std::string> toks = tokenize(raw);
        if (toks.empty()) {
            throw ConfigError("lexicon marker reduces to no tokens: \"" + raw + "\"");
        }
        std::string canon;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (i) canon.push_back(' ');
            canon += toks[i];
        }
        if (std::find(phrases_.begin(), phrases_.end(), canon) != phrases_.end()) {
            continue; // duplicate after normalization
        }
        longest_ = std::max(longest_, toks.size());
        phrases_.push_back(std::move(canon));
        marker_tokens_.push_back(std::move(toks));
    }
}

Lexicon Lexicon::from_file(Component component, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open lexicon file: " + path);
    std::vector<std::string> phrases;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        phrases.push_back(line);
    }
    if (phrases.empty()) throw InputError("lexicon file has no markers: " + path);
    return Lexicon(component, std::move(phrases));
}

Lexicon Lexicon::builtin_seed(Component component) {
    return Lexicon(component, seed_phrases(component));
}

std::size_t count_markers(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
    const auto& markers = lexicon.marker_tokens();
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t best = 0; // longest marker matching at i
        for (const auto& m : markers) {
            if (m.size() <= best || i + m.size() > tokens.size()) continue;
            if (std::equal(m.begin(), m.end(), tokens.begin() + static_cast<long>(i))) {
                best = m.size();
            }
        }
        if (best > 0) {
            n += best;
            i += best;
        } else {
            ++i;
        }
    }
    return n;
}

double component_score(std::size_t n, std::size_t total_tokens) {
    if (total_tokens == 0) return 0.0;
    return std::min(1.0, static_cast<double>(n) / static_cast<double>(total_tokens));
}

} // namespace zwise
