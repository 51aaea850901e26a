#ifndef GENCP_CONSTRAINT_SPEC_HPP
#define GENCP_CONSTRAINT_SPEC_HPP

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace gencp {

// Sentence a constraint applies to: one ordinal (0-based) or every sentence.
struct SentenceScope {
    static constexpr int kAll = -1;
    int ordinal = kAll;

    bool all() const { return ordinal == kAll; }
    bool applies_to(int sentence) const { return all() || ordinal == sentence; }
    bool operator==(const SentenceScope&) const = default;
};

// Rendered character length of a sentence must land in [target_min, target_max].
// An exact constraint is target_min == target_max.
struct CharSumSpec {
    SentenceScope scope;
    int target_min = 0;
    int target_max = 0;
    bool operator==(const CharSumSpec&) const = default;
};

struct WordCountSpec {
    SentenceScope scope;
    int min = 0;
    std::optional<int> max;
    bool operator==(const WordCountSpec&) const = default;
};

struct SentenceCountSpec {
    int n = 1;
    bool operator==(const SentenceCountSpec&) const = default;
};

// Sentence `sentence` must begin with `keyword` (case-sensitive word core).
struct PrefixKeywordSpec {
    int sentence = 0;
    std::string keyword;
    bool operator==(const PrefixKeywordSpec&) const = default;
};

// No word in the text may equal any of these (whole word, case-insensitive).
struct ForbiddenWordsSpec {
    std::set<std::string> words;
    bool operator==(const ForbiddenWordsSpec&) const = default;
};

// No excluded letter may appear anywhere (case-insensitive).
struct LetterExclusionSpec {
    std::set<char> letters;
    bool operator==(const LetterExclusionSpec&) const = default;
};

struct ConstraintSpec {
    std::variant<CharSumSpec, WordCountSpec, SentenceCountSpec,
                 PrefixKeywordSpec, ForbiddenWordsSpec, LetterExclusionSpec>
        variant;

    bool operator==(const ConstraintSpec&) const = default;

    // Short stable identifier used in violation reports ("char_sum[all]", ...).
    std::string id() const;
};

// Throws TaskError when a spec's fields are inconsistent (min > max, n < 1,
// empty keyword, empty word/letter sets).
void check_constraint(const ConstraintSpec& spec);

ConstraintSpec make_char_sum(SentenceScope scope, int target_min, int target_max);
ConstraintSpec make_word_count(SentenceScope scope, int min, std::optional<int> max = std::nullopt);
ConstraintSpec make_sentence_count(int n);
ConstraintSpec make_prefix_keyword(int sentence, std::string keyword);
ConstraintSpec make_forbidden_words(std::set<std::string> words);
ConstraintSpec make_letter_exclusion(std::set<char> letters);

} // namespace gencp

#endif
