#include "gencp/constraint_spec.hpp"

#include "gencp/errors.hpp"

namespace gencp {

namespace {

std::string scope_str(SentenceScope s) {
    return s.all() ? "all" : "s" + std::to_string(s.ordinal);
}

} // namespace

std::string ConstraintSpec::id() const {
    struct Visitor {
        std::string operator()(const CharSumSpec& c) const {
            return "char_sum[" + scope_str(c.scope) + "]";
        }
        std::string operator()(const WordCountSpec& c) const {
            return "word_count[" + scope_str(c.scope) + "]";
        }
        std::string operator()(const SentenceCountSpec&) const { return "sentence_count"; }
        std::string operator()(const PrefixKeywordSpec& c) const {
            return "prefix_keyword[s" + std::to_string(c.sentence) + "]";
        }
        std::string operator()(const ForbiddenWordsSpec&) const { return "forbidden_words"; }
        std::string operator()(const LetterExclusionSpec&) const { return "letter_exclusion"; }
    };
    return std::visit(Visitor{}, variant);
}

void check_constraint(const ConstraintSpec& spec) {
    struct Visitor {
        void operator()(const CharSumSpec& c) const {
            if (c.target_min < 0 || c.target_min > c.target_max)
                throw TaskError("char_sum: need 0 <= min <= max");
        }
        void operator()(const WordCountSpec& c) const {
            if (c.min < 0) throw TaskError("word_count: min must be >= 0");
            if (c.max && *c.max < c.min) throw TaskError("word_count: max < min");
        }
        void operator()(const SentenceCountSpec& c) const {
            if (c.n < 1) throw TaskError("sentence_count: n must be >= 1");
        }
        void operator()(const PrefixKeywordSpec& c) const {
            if (c.keyword.empty()) throw TaskError("prefix_keyword: empty keyword");
            if (c.sentence < 0) throw TaskError("prefix_keyword: negative sentence");
        }
        void operator()(const ForbiddenWordsSpec& c) const {
            if (c.words.empty()) throw TaskError("forbidden_words: empty word set");
            for (const auto& w : c.words)
                if (w.empty()) throw TaskError("forbidden_words: empty word");
        }
        void operator()(const LetterExclusionSpec& c) const {
            if (c.letters.empty()) throw TaskError("letter_exclusion: empty letter set");
        }
    };
    std::visit(Visitor{}, spec.variant);
}

ConstraintSpec make_char_sum(SentenceScope scope, int target_min, int target_max) {
    ConstraintSpec s{CharSumSpec{scope, target_min, target_max}};
    check_constraint(s);
    return s;
}

ConstraintSpec make_word_count(SentenceScope scope, int min, std::optional<int> max) {
    ConstraintSpec s{WordCountSpec{scope, min, max}};
    check_constraint(s);
    return s;
}

ConstraintSpec make_sentence_count(int n) {
    ConstraintSpec s{SentenceCountSpec{n}};
    check_constraint(s);
    return s;
}

ConstraintSpec make_prefix_keyword(int sentence, std::string keyword) {
    ConstraintSpec s{PrefixKeywordSpec{sentence, std::move(keyword)}};
    check_constraint(s);
    return s;
}

ConstraintSpec make_forbidden_words(std::set<std::string> words) {
    ConstraintSpec s{ForbiddenWordsSpec{std::move(words)}};
    check_constraint(s);
    return s;
}

ConstraintSpec make_letter_exclusion(std::set<char> letters) {
    ConstraintSpec s{LetterExclusionSpec{std::move(letters)}};
    check_constraint(s);
    return s;
}

} // namespace gencp
