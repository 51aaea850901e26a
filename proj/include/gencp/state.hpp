#ifndef GENCP_STATE_HPP
#define GENCP_STATE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gencp/constraint_spec.hpp"
#include "gencp/task.hpp"
#include "gencp/token.hpp"

namespace gencp {

// How sentence character totals are measured. With count_spaces (default)
// a sentence's total is the length of its rendered string: word characters
// plus one space before each non-initial word, punctuation attached to the
// word it follows. Without it, only non-space characters count.
struct CountingRule {
    bool count_spaces = true;
    bool operator==(const CountingRule&) const = default;
};

// Token-to-word grouping. BoundaryRule opens a word on separator-leading or
// sentence-initial tokens; TokenPerWord treats every token as a whole word.
enum class Grouping { BoundaryRule, TokenPerWord };

struct DecisionVariable {
    int id = 0;
    std::optional<int> meta_id;         // set when the token is assigned
    std::optional<Token> assignment;
    std::optional<Domain> domain;
};

// A word-level variable: one or more consecutive decision variables.
struct MetaVariable {
    int id = 0;
    std::vector<int> member_ids;
    bool complete = false;
    std::string word;  // member surfaces concatenated, leading separator trimmed

    bool operator==(const MetaVariable&) const = default;
};

struct TrailEntry {
    int var_id = 0;
    Token token;

    // Undo bookkeeping, filled by assign_token.
    bool opened_meta = false;
    bool completed_prev_meta = false;
    bool completed_own_meta = false;
    bool closed_sentence = false;
    int prev_char_used = 0;
    int prev_word_count = 0;
    bool prev_at_sentence_start = true;
};

// The evolving assignment: variables created on the fly, word grouping,
// a chronological trail, and per-sentence counters kept incrementally.
struct CspState {
    std::vector<DecisionVariable> variables;
    std::vector<MetaVariable> metas;
    std::vector<TrailEntry> trail;
    std::vector<ConstraintSpec> constraints;

    int sentence_index = 0;
    int sentence_char_used = 0;
    int sentence_word_count = 0;  // completed countable words in current sentence
    bool at_sentence_start = true;

    CountingRule counting;
    Grouping grouping = Grouping::BoundaryRule;

    bool has_open_meta() const;
    const MetaVariable* open_meta() const;  // null when none
    int assigned_count() const { return static_cast<int>(trail.size()); }

    // This token's addition to sentence_char_used if assigned now.
    int contribution(const Token& token) const;
    // Would this token open a new meta-variable if assigned now?
    bool opens_word(const Token& token) const;

    // Structural equality: (trail, metas, sentence counters), not identity.
    bool operator==(const CspState& other) const;
};

// Returns a state with no variables and the task's constraints copied in.
// Throws TaskError for a task with neither constraints nor a budget.
CspState init_state(const TaskSpec& task, CountingRule counting = {},
                    Grouping grouping = Grouping::BoundaryRule);

// Appends one unassigned variable and returns its id. The previous
// variable, if any, must already be assigned.
int extend_variable(CspState& state);

// Attaches a generated domain to the newest (unassigned) variable.
void set_domain(CspState& state, int var, Domain domain);

// Assigns `token` (which must be in the variable's domain) to the newest
// variable: pushes a trail entry, maintains word grouping and sentence
// counters, closes the sentence on a terminal token.
void assign_token(CspState& state, int var, const Token& token);

// Undoes the newest assignment exactly; returns (variable id, token).
std::pair<int, Token> retract_last(CspState& state);

// Removes the newest variable, which must be unassigned (search uses this
// when a variable's domain is exhausted).
void drop_last_variable(CspState& state);

// Deterministic surface realization of the trail: sentences joined by a
// single space, each sentence's leading separator collapsed, no trailing
// separator.
std::string render_text(const CspState& state);

// Current in-progress sentence as rendered (empty at a sentence start).
std::string render_current_sentence(const CspState& state);

// "Us;ing; a; transform;er;" encoding: every surface followed by ';',
// word-initial separators preserved.
std::string serialize_assignment(const CspState& state);

// Inverse of serialize_assignment (scores are not encoded and come back 0).
// Throws ParseError on an unterminated or empty token.
std::vector<Token> parse_assignment(const std::string& text);

} // namespace gencp

#endif
