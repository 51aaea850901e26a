#ifndef GENCP_CONSTRAINTS_HPP
#define GENCP_CONSTRAINTS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gencp/state.hpp"
#include "gencp/task.hpp"
#include "gencp/token.hpp"

namespace gencp {

// Tunables shared by the propagators.
struct PropagationConfig {
    // Cheapest admissible continuation word (separator + one letter). Must
    // not exceed the backend's true minimum sentence-closing cost or the
    // char-sum propagator over-prunes.
    int min_word_cost = 2;
    // Cap on word length used for word-count-coupled upper bounds.
    int max_word_len = 20;
    // True when the backend never splits a word across tokens; lexical
    // propagators may then judge a word-opening token as a finished word.
    bool whole_word_tokens = false;
};

// Admissible char-cost window computed for the next token.
struct PropagationBounds {
    int lower = 0;
    int upper = 0;
};

struct PropagationResult {
    Domain filtered;
    bool wiped_out = false;
    std::optional<PropagationBounds> bounds_used;
};

// Candidate char-length sets for previewed future word positions (the
// positions after the token under consideration). `closing` holds the
// subset of costs belonging to sentence-ending candidates.
struct FutureLengthSets {
    std::vector<std::set<int>> any;
    std::vector<std::set<int>> closing;

    std::size_t depth() const { return any.size(); }
};

// Filters `candidate` against a char-sum constraint on the current
// sentence. Without future information, keeps a sentence-closing token iff
// it lands the sentence total inside the target window, and a continuation
// token iff at least one more word fits (and, when a word-count maximum
// bounds the remaining words, iff the remaining budget is still coverable).
// With future length sets, continuation feasibility is decided against the
// previewed costs instead of the open-ended relaxation.
PropagationResult propagate_char_sum(const CspState& state, const Domain& candidate,
                                     const CharSumSpec& spec,
                                     const PropagationConfig& cfg = {},
                                     const std::optional<FutureLengthSets>& future = std::nullopt,
                                     std::optional<int> remaining_word_slots = std::nullopt);

PropagationResult propagate_word_count(const CspState& state, const Domain& candidate,
                                       const WordCountSpec& spec);

// PrefixKeyword / ForbiddenWords / LetterExclusion filtering.
PropagationResult propagate_lexical(const CspState& state, const Domain& candidate,
                                    const ConstraintSpec& spec,
                                    const PropagationConfig& cfg = {});

// Runs every propagator applicable to the current sentence, in constraint
// order. `future`, when present, sharpens the char-sum propagator.
PropagationResult propagate_all(const CspState& state, const TaskSpec& task,
                                const Domain& candidate, const PropagationConfig& cfg,
                                const std::optional<FutureLengthSets>& future = std::nullopt);

// ---------------------------------------------------------------------------
// Independent validation (the acceptance oracle). Re-parses the text from
// scratch; shares no state or code with the propagators above.
// ---------------------------------------------------------------------------

struct Violation {
    std::string constraint_id;
    std::string expected;
    std::string measured;
};

struct SentenceMeasure {
    std::string text;
    int chars = 0;
    int words = 0;
};

struct ValidationReport {
    bool satisfied = true;
    std::vector<Violation> violations;
    std::vector<SentenceMeasure> sentences;
};

// Splits text into sentences at terminal punctuation followed by a space
// or end of text; a trailing unterminated fragment counts as a sentence.
std::vector<std::string> split_sentences(const std::string& text);

// Whitespace-separated chunks containing at least one alphanumeric.
std::vector<std::string> split_sentence_words(const std::string& sentence);

// Word with leading/trailing non-alphanumeric characters removed.
std::string word_core(const std::string& word);

ValidationReport validate_solution(const std::string& text, const TaskSpec& task,
                                   CountingRule counting = {});

std::string violations_to_json(const ValidationReport& report);

} // namespace gencp

#endif
