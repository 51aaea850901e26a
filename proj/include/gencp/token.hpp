#ifndef GENCP_TOKEN_HPP
#define GENCP_TOKEN_HPP

#include <string>
#include <vector>

namespace gencp {

constexpr char kSeparator = ' ';

// Number of Unicode scalar values in a UTF-8 string (continuation bytes
// are not counted). The mock corpus is ASCII, but live backends are not.
int char_count(const std::string& s);

bool is_sentence_terminal(char c);

// One candidate value: a sub-word or whole-word piece as produced by a
// language-model backend, with the flags the solver needs precomputed.
struct Token {
    std::string surface;
    int char_len = 0;        // char_count(surface)
    double score = 0.0;      // log-likelihood from the producing model
    bool starts_word = false;    // surface begins with the separator space
    bool ends_sentence = false;  // last non-space char is one of . ! ?

    bool operator==(const Token& other) const = default;
};

// Derives char_len / starts_word / ends_sentence from the surface.
// Throws ContractViolation on an empty surface.
Token make_token(std::string surface, double score);

enum class DomainSource { Autoregressive, Masked, Mock };

// Ordered candidate list for one variable, best first.
struct Domain {
    std::vector<Token> candidates;
    DomainSource source = DomainSource::Mock;
    bool under_k = false;  // backend returned fewer than the k requested

    bool empty() const { return candidates.empty(); }
    std::size_t size() const { return candidates.size(); }
};

// Sorts by score descending (ties lexicographic by surface) and drops
// duplicate surfaces, keeping the better-scored instance.
void normalize_domain(Domain& d);

// Keeps at most k candidates (domain must already be normalized).
void truncate_domain(Domain& d, int k);

} // namespace gencp

#endif
