#include "gencp/token.hpp"

#include <algorithm>
#include <unordered_set>

#include "gencp/errors.hpp"

namespace gencp {

int char_count(const std::string& s) {
    int n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

bool is_sentence_terminal(char c) {
    return c == '.' || c == '!' || c == '?';
}

Token make_token(std::string surface, double score) {
    if (surface.empty())
        throw ContractViolation("token surface must be non-empty");
    Token t;
    t.char_len = char_count(surface);
    t.score = score;
    t.starts_word = surface.front() == kSeparator;
    auto last = surface.find_last_not_of(kSeparator);
    t.ends_sentence = last != std::string::npos && is_sentence_terminal(surface[last]);
    t.surface = std::move(surface);
    return t;
}

void normalize_domain(Domain& d) {
    std::stable_sort(d.candidates.begin(), d.candidates.end(),
                     [](const Token& a, const Token& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.surface < b.surface;
                     });
    std::unordered_set<std::string> seen;
    std::vector<Token> unique;
    unique.reserve(d.candidates.size());
    for (auto& t : d.candidates)
        if (seen.insert(t.surface).second) unique.push_back(std::move(t));
    d.candidates = std::move(unique);
}

void truncate_domain(Domain& d, int k) {
    if (k >= 0 && d.candidates.size() > static_cast<std::size_t>(k))
        d.candidates.resize(static_cast<std::size_t>(k));
}

} // namespace gencp
