#include "gencp/state.hpp"

#include <algorithm>

#include "gencp/errors.hpp"

namespace gencp {

namespace {

// Non-space scalar count, for the count_spaces=false rule.
int nonspace_count(const std::string& s) {
    int n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80 && c != static_cast<unsigned char>(kSeparator)) ++n;
    return n;
}

std::string strip_leading_separator(const std::string& s) {
    if (!s.empty() && s.front() == kSeparator) return s.substr(1);
    return s;
}

// A meta counts toward the word count when its word has an alphanumeric
// character (a bare punctuation "word" is not a word).
bool countable_word(const std::string& word) {
    return std::any_of(word.begin(), word.end(),
                       [](unsigned char c) { return std::isalnum(c); });
}

} // namespace

bool CspState::has_open_meta() const {
    return !metas.empty() && !metas.back().complete;
}

const MetaVariable* CspState::open_meta() const {
    return has_open_meta() ? &metas.back() : nullptr;
}

int CspState::contribution(const Token& token) const {
    if (!counting.count_spaces) return nonspace_count(token.surface);
    int c = token.char_len;
    if (at_sentence_start && token.starts_word) c -= 1;
    return c;
}

bool CspState::opens_word(const Token& token) const {
    if (grouping == Grouping::TokenPerWord) return true;
    return token.starts_word || at_sentence_start;
}

bool CspState::operator==(const CspState& other) const {
    if (trail.size() != other.trail.size()) return false;
    for (std::size_t i = 0; i < trail.size(); ++i) {
        if (trail[i].var_id != other.trail[i].var_id) return false;
        if (trail[i].token != other.trail[i].token) return false;
    }
    return metas == other.metas && sentence_index == other.sentence_index &&
           sentence_char_used == other.sentence_char_used &&
           sentence_word_count == other.sentence_word_count &&
           at_sentence_start == other.at_sentence_start;
}

CspState init_state(const TaskSpec& task, CountingRule counting, Grouping grouping) {
    check_task(task);
    if (task.constraints.empty() && !task.budget.any())
        throw TaskError("unbounded task: no constraints and no budget");
    CspState state;
    state.constraints = task.constraints;
    state.counting = counting;
    state.grouping = grouping;
    return state;
}

int extend_variable(CspState& state) {
    if (!state.variables.empty() && !state.variables.back().assignment)
        throw ContractViolation("previous variable unassigned");
    DecisionVariable v;
    v.id = static_cast<int>(state.variables.size());
    state.variables.push_back(std::move(v));
    return state.variables.back().id;
}

void set_domain(CspState& state, int var, Domain domain) {
    if (state.variables.empty() || state.variables.back().id != var)
        throw ContractViolation("set_domain: not the newest variable");
    if (state.variables.back().assignment)
        throw ContractViolation("set_domain: variable already assigned");
    state.variables.back().domain = std::move(domain);
}

void assign_token(CspState& state, int var, const Token& token) {
    if (state.variables.empty() || state.variables.back().id != var)
        throw ContractViolation("assign_token: not the newest variable");
    DecisionVariable& dv = state.variables.back();
    if (dv.assignment) throw ContractViolation("assign_token: already assigned");
    if (!dv.domain) throw ContractViolation("assign_token: no domain");
    bool in_domain = std::any_of(
        dv.domain->candidates.begin(), dv.domain->candidates.end(),
        [&](const Token& t) { return t.surface == token.surface; });
    if (!in_domain) throw ContractViolation("assign_token: token not in domain");

    TrailEntry entry;
    entry.var_id = var;
    entry.token = token;
    entry.prev_char_used = state.sentence_char_used;
    entry.prev_word_count = state.sentence_word_count;
    entry.prev_at_sentence_start = state.at_sentence_start;

    const int added = state.contribution(token);
    const bool opens = state.opens_word(token);

    if (opens) {
        if (state.has_open_meta()) {
            MetaVariable& prev = state.metas.back();
            prev.complete = true;
            entry.completed_prev_meta = true;
            if (countable_word(prev.word)) state.sentence_word_count += 1;
        }
        MetaVariable meta;
        meta.id = static_cast<int>(state.metas.size());
        meta.member_ids.push_back(var);
        meta.word = strip_leading_separator(token.surface);
        state.metas.push_back(std::move(meta));
        entry.opened_meta = true;
    } else {
        if (!state.has_open_meta())
            throw ContractViolation("assign_token: continuation token with no open word");
        MetaVariable& meta = state.metas.back();
        meta.member_ids.push_back(var);
        meta.word += token.surface;
    }
    dv.meta_id = state.metas.back().id;
    dv.assignment = token;
    state.sentence_char_used += added;

    if (state.grouping == Grouping::TokenPerWord && !state.metas.back().complete) {
        state.metas.back().complete = true;
        entry.completed_own_meta = true;
        if (countable_word(state.metas.back().word)) state.sentence_word_count += 1;
    }

    if (token.ends_sentence) {
        if (!state.metas.back().complete) {
            state.metas.back().complete = true;
            entry.completed_own_meta = true;
            if (countable_word(state.metas.back().word)) state.sentence_word_count += 1;
        }
        entry.closed_sentence = true;
        state.sentence_index += 1;
        state.sentence_char_used = 0;
        state.sentence_word_count = 0;
        state.at_sentence_start = true;
    } else {
        state.at_sentence_start = false;
    }

    state.trail.push_back(std::move(entry));
}

std::pair<int, Token> retract_last(CspState& state) {
    if (state.trail.empty()) throw ContractViolation("nothing to retract");
    TrailEntry entry = std::move(state.trail.back());
    state.trail.pop_back();

    if (entry.closed_sentence) state.sentence_index -= 1;
    state.sentence_char_used = entry.prev_char_used;
    state.sentence_word_count = entry.prev_word_count;
    state.at_sentence_start = entry.prev_at_sentence_start;

    if (entry.opened_meta) {
        state.metas.pop_back();
    } else {
        MetaVariable& meta = state.metas.back();
        meta.member_ids.pop_back();
        meta.word.resize(meta.word.size() - entry.token.surface.size());
        if (entry.completed_own_meta) meta.complete = false;
    }
    if (entry.completed_prev_meta) state.metas.back().complete = false;

    DecisionVariable& dv = state.variables.back();
    dv.assignment.reset();
    dv.meta_id.reset();
    return {entry.var_id, std::move(entry.token)};
}

void drop_last_variable(CspState& state) {
    if (state.variables.empty())
        throw ContractViolation("drop_last_variable: no variables");
    if (state.variables.back().assignment)
        throw ContractViolation("drop_last_variable: variable is assigned");
    state.variables.pop_back();
}

namespace {

// Shared by render_text / render_current_sentence so incremental counters
// and full renders cannot drift apart.
struct RenderedTrail {
    std::vector<std::string> completed;
    std::string current;
};

RenderedTrail render_trail(const CspState& state) {
    RenderedTrail r;
    bool at_start = true;
    for (const TrailEntry& entry : state.trail) {
        const std::string& s = entry.token.surface;
        if (at_start && !s.empty() && s.front() == kSeparator)
            r.current.append(s, 1, std::string::npos);
        else
            r.current += s;
        if (entry.token.ends_sentence) {
            r.completed.push_back(std::move(r.current));
            r.current.clear();
            at_start = true;
        } else {
            at_start = false;
        }
    }
    return r;
}

} // namespace

std::string render_text(const CspState& state) {
    RenderedTrail r = render_trail(state);
    std::string text;
    for (const std::string& s : r.completed) {
        if (!text.empty()) text += kSeparator;
        text += s;
    }
    if (!r.current.empty()) {
        if (!text.empty()) text += kSeparator;
        text += r.current;
    }
    while (!text.empty() && text.back() == kSeparator) text.pop_back();
    return text;
}

std::string render_current_sentence(const CspState& state) {
    return render_trail(state).current;
}

std::string serialize_assignment(const CspState& state) {
    std::string out;
    for (const TrailEntry& entry : state.trail) {
        if (entry.token.surface.find(';') != std::string::npos)
            throw ContractViolation("serialize_assignment: surface contains ';'");
        out += entry.token.surface;
        out += ';';
    }
    return out;
}

std::vector<Token> parse_assignment(const std::string& text) {
    std::vector<Token> tokens;
    if (text.empty()) return tokens;
    if (text.back() != ';') throw ParseError("parse_assignment: unterminated token");
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t sep = text.find(';', start);
        if (sep == start) throw ParseError("parse_assignment: empty token");
        tokens.push_back(make_token(text.substr(start, sep - start), 0.0));
        start = sep + 1;
    }
    return tokens;
}

} // namespace gencp
