#include "gencp/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "gencp/errors.hpp"

namespace gencp {

namespace {

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

bool countable(const std::string& word) {
    return std::any_of(word.begin(), word.end(),
                       [](unsigned char c) { return std::isalnum(c); });
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// The word the candidate would belong to, as it stands after assignment.
std::string prospective_word(const CspState& state, const Token& v) {
    if (state.opens_word(v)) return strip_leading_separator(v.surface);
    if (const MetaVariable* open = state.open_meta()) return open->word + v.surface;
    return strip_leading_separator(v.surface);
}

// Does the candidate close its own word at assignment time (or, for a
// whole-word backend, read as a finished word)?
bool completes_own_word(const CspState& state, const Token& v, const PropagationConfig& cfg) {
    if (v.ends_sentence || state.grouping == Grouping::TokenPerWord) return true;
    return cfg.whole_word_tokens && state.opens_word(v);
}

// True when the open meta-variable is the first word of the current
// sentence (its first member was assigned at a sentence start).
bool open_meta_is_sentence_first(const CspState& state) {
    const MetaVariable* open = state.open_meta();
    if (!open) return false;
    const int first_var = open->member_ids.front();
    return state.trail[static_cast<std::size_t>(first_var)].prev_at_sentence_start;
}

// Feasibility of continuing past a non-closing candidate of contribution c,
// judged against previewed future word costs: either the sentence closes at
// some previewed position with the running total inside [lo, hi], or the
// previewed window can be traversed leaving room for at least one more word.
bool future_feasible(int c, int lo, int hi, const FutureLengthSets& fut, int min_word_cost) {
    std::set<int> reachable{c};
    for (std::size_t pos = 0; pos < fut.depth(); ++pos) {
        for (int s : reachable)
            for (int close_cost : fut.closing[pos])
                if (lo <= s + close_cost && s + close_cost <= hi) return true;
        std::set<int> next;
        for (int s : reachable)
            for (int cost : fut.any[pos])
                if (s + cost <= hi) next.insert(s + cost);
        reachable = std::move(next);
        if (reachable.empty()) return false;
    }
    for (int s : reachable)
        if (s + min_word_cost <= hi) return true;
    return false;
}

} // namespace

PropagationResult propagate_char_sum(const CspState& state, const Domain& candidate,
                                     const CharSumSpec& spec, const PropagationConfig& cfg,
                                     const std::optional<FutureLengthSets>& future,
                                     std::optional<int> remaining_word_slots) {
    const int lo = spec.target_min - state.sentence_char_used;
    const int hi = spec.target_max - state.sentence_char_used;

    PropagationResult result;
    result.filtered.source = candidate.source;
    PropagationBounds bounds;
    bounds.lower = std::max(0, lo);
    bounds.upper = std::max(bounds.lower, hi);
    result.bounds_used = bounds;

    for (const Token& v : candidate.candidates) {
        const int c = state.contribution(v);
        bool keep;
        if (v.ends_sentence) {
            keep = lo <= c && c <= hi;
        } else if (future) {
            keep = future_feasible(c, lo, hi, *future, cfg.min_word_cost);
        } else {
            keep = c + cfg.min_word_cost <= hi;
            if (keep && remaining_word_slots) {
                const int slots =
                    std::max(0, *remaining_word_slots - (state.opens_word(v) ? 1 : 0));
                keep = lo - c <= slots * (1 + cfg.max_word_len);
            }
        }
        if (keep) result.filtered.candidates.push_back(v);
    }
    result.wiped_out = result.filtered.candidates.empty();
    return result;
}

PropagationResult propagate_word_count(const CspState& state, const Domain& candidate,
                                       const WordCountSpec& spec) {
    const int completed = state.sentence_word_count;
    const MetaVariable* open = state.open_meta();
    const int open_countable = open && countable(open->word) ? 1 : 0;
    const int max = spec.max ? *spec.max : INT_MAX;

    PropagationResult result;
    result.filtered.source = candidate.source;
    for (const Token& v : candidate.candidates) {
        const bool opens = state.opens_word(v);
        bool keep = true;
        if (v.ends_sentence) {
            int final_count = completed;
            if (opens) {
                final_count += open_countable;
                if (countable(strip_leading_separator(v.surface))) final_count += 1;
            } else {
                std::string word = open ? open->word + v.surface
                                        : strip_leading_separator(v.surface);
                if (countable(word)) final_count += 1;
            }
            keep = spec.min <= final_count && final_count <= max;
        } else if (opens) {
            const int started = completed + open_countable +
                                (countable(strip_leading_separator(v.surface)) ? 1 : 0);
            keep = started <= max;
        }
        if (keep) result.filtered.candidates.push_back(v);
    }
    result.wiped_out = result.filtered.candidates.empty();
    return result;
}

namespace {

PropagationResult filter_domain(const Domain& candidate, const CspState&,
                                const std::function<bool(const Token&)>& keep) {
    PropagationResult result;
    result.filtered.source = candidate.source;
    for (const Token& v : candidate.candidates)
        if (keep(v)) result.filtered.candidates.push_back(v);
    result.wiped_out = result.filtered.candidates.empty();
    return result;
}

PropagationResult propagate_prefix_keyword(const CspState& state, const Domain& candidate,
                                           const PrefixKeywordSpec& spec,
                                           const PropagationConfig& cfg) {
    // Only bites while the first word of the target sentence is being built.
    const bool first_position =
        state.sentence_index == spec.sentence &&
        (state.at_sentence_start || open_meta_is_sentence_first(state));
    if (!first_position) {
        PropagationResult r;
        r.filtered = candidate;
        r.wiped_out = candidate.empty();
        return r;
    }
    const std::string& kw = spec.keyword;
    const MetaVariable* open = state.open_meta();
    return filter_domain(candidate, state, [&](const Token& v) {
        const bool opens = state.opens_word(v);
        if (!state.at_sentence_start && opens)
            return word_core(open->word) == kw;  // first word completes as-is
        const std::string w = prospective_word(state, v);
        if (completes_own_word(state, v, cfg)) return word_core(w) == kw;
        return kw.compare(0, w.size(), w) == 0 || word_core(w) == kw;
    });
}

PropagationResult propagate_forbidden_words(const CspState& state, const Domain& candidate,
                                            const ForbiddenWordsSpec& spec,
                                            const PropagationConfig& cfg) {
    std::set<std::string> lowered;
    for (const auto& w : spec.words) lowered.insert(lowercase(w));
    auto forbidden = [&](const std::string& word) {
        const std::string core = lowercase(word_core(word));
        return !core.empty() && lowered.count(core) > 0;
    };
    const MetaVariable* open = state.open_meta();
    return filter_domain(candidate, state, [&](const Token& v) {
        if (state.opens_word(v) && open && forbidden(open->word)) return false;
        if (completes_own_word(state, v, cfg) && forbidden(prospective_word(state, v)))
            return false;
        return true;
    });
}

PropagationResult propagate_letter_exclusion(const CspState& state, const Domain& candidate,
                                             const LetterExclusionSpec& spec) {
    std::set<char> lowered;
    for (char c : spec.letters)
        lowered.insert(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return filter_domain(candidate, state, [&](const Token& v) {
        return std::none_of(v.surface.begin(), v.surface.end(), [&](char c) {
            return lowered.count(
                       static_cast<char>(std::tolower(static_cast<unsigned char>(c)))) > 0;
        });
    });
}

} // namespace

PropagationResult propagate_lexical(const CspState& state, const Domain& candidate,
                                    const ConstraintSpec& spec, const PropagationConfig& cfg) {
    if (const auto* pk = std::get_if<PrefixKeywordSpec>(&spec.variant))
        return propagate_prefix_keyword(state, candidate, *pk, cfg);
    if (const auto* fw = std::get_if<ForbiddenWordsSpec>(&spec.variant))
        return propagate_forbidden_words(state, candidate, *fw, cfg);
    if (const auto* le = std::get_if<LetterExclusionSpec>(&spec.variant))
        return propagate_letter_exclusion(state, candidate, *le);
    throw ContractViolation("propagate_lexical: not a lexical constraint");
}

PropagationResult propagate_all(const CspState& state, const TaskSpec& task,
                                const Domain& candidate, const PropagationConfig& cfg,
                                const std::optional<FutureLengthSets>& future) {
    // Word slots left under a word-count maximum in this sentence, for the
    // char-sum upper bound.
    std::optional<int> slots;
    for (const auto& c : task.constraints_for_sentence(state.sentence_index)) {
        if (const auto* wc = std::get_if<WordCountSpec>(&c.variant)) {
            if (!wc->max) continue;
            const MetaVariable* open = state.open_meta();
            const int used =
                state.sentence_word_count + (open && countable(open->word) ? 1 : 0);
            slots = std::max(0, *wc->max - used);
        }
    }

    PropagationResult acc;
    acc.filtered = candidate;
    for (const auto& c : task.constraints_for_sentence(state.sentence_index)) {
        PropagationResult step;
        if (const auto* cs = std::get_if<CharSumSpec>(&c.variant)) {
            step = propagate_char_sum(state, acc.filtered, *cs, cfg, future, slots);
            acc.bounds_used = step.bounds_used;
        } else if (const auto* wc = std::get_if<WordCountSpec>(&c.variant)) {
            step = propagate_word_count(state, acc.filtered, *wc);
        } else if (std::holds_alternative<SentenceCountSpec>(c.variant)) {
            continue;  // enforced by the search's termination rule
        } else {
            step = propagate_lexical(state, acc.filtered, c, cfg);
        }
        acc.filtered = std::move(step.filtered);
        if (acc.filtered.empty()) break;
    }
    acc.wiped_out = acc.filtered.empty();
    return acc;
}

// ---------------------------------------------------------------------------
// Validator: an independent reading of the text.
// ---------------------------------------------------------------------------

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (is_sentence_terminal(text[i]) &&
            (i + 1 == text.size() || text[i + 1] == kSeparator)) {
            sentences.push_back(text.substr(start, i + 1 - start));
            start = i + 1;
            while (start < text.size() && text[start] == kSeparator) ++start;
            i = start == 0 ? 0 : start - 1;
        }
    }
    if (start < text.size()) {
        std::string rest = text.substr(start);
        if (rest.find_first_not_of(kSeparator) != std::string::npos)
            sentences.push_back(rest);
    }
    return sentences;
}

std::vector<std::string> split_sentence_words(const std::string& sentence) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < sentence.size()) {
        while (i < sentence.size() && sentence[i] == kSeparator) ++i;
        std::size_t j = i;
        while (j < sentence.size() && sentence[j] != kSeparator) ++j;
        if (j > i) {
            std::string chunk = sentence.substr(i, j - i);
            if (countable(chunk)) words.push_back(std::move(chunk));
        }
        i = j;
    }
    return words;
}

std::string word_core(const std::string& word) {
    std::size_t b = 0, e = word.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(word[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(word[e - 1]))) --e;
    return word.substr(b, e - b);
}

ValidationReport validate_solution(const std::string& text, const TaskSpec& task,
                                   CountingRule counting) {
    ValidationReport report;
    const std::vector<std::string> sentences = split_sentences(text);
    for (const std::string& s : sentences) {
        SentenceMeasure m;
        m.text = s;
        m.chars = counting.count_spaces ? char_count(s) : nonspace_count(s);
        m.words = static_cast<int>(split_sentence_words(s).size());
        report.sentences.push_back(std::move(m));
    }
    const int n_sentences = static_cast<int>(report.sentences.size());

    auto violate = [&](const std::string& id, std::string expected, std::string measured) {
        report.satisfied = false;
        report.violations.push_back({id, std::move(expected), std::move(measured)});
    };

    auto sentence_indices = [&](SentenceScope scope) {
        std::vector<int> idx;
        if (scope.all())
            for (int s = 0; s < task.sentence_count; ++s) idx.push_back(s);
        else
            idx.push_back(scope.ordinal);
        return idx;
    };

    for (const ConstraintSpec& c : task.all_constraints()) {
        const std::string id = c.id();
        std::visit(
            [&](const auto& spec) {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, SentenceCountSpec>) {
                    if (n_sentences != spec.n)
                        violate(id, std::to_string(spec.n), std::to_string(n_sentences));
                } else if constexpr (std::is_same_v<T, CharSumSpec>) {
                    for (int s : sentence_indices(spec.scope)) {
                        if (s >= n_sentences) {
                            violate(id, "sentence " + std::to_string(s), "missing");
                            continue;
                        }
                        const int chars = report.sentences[s].chars;
                        if (chars < spec.target_min || chars > spec.target_max)
                            violate(id,
                                    "[" + std::to_string(spec.target_min) + "," +
                                        std::to_string(spec.target_max) + "]",
                                    std::to_string(chars));
                    }
                } else if constexpr (std::is_same_v<T, WordCountSpec>) {
                    for (int s : sentence_indices(spec.scope)) {
                        if (s >= n_sentences) {
                            violate(id, "sentence " + std::to_string(s), "missing");
                            continue;
                        }
                        const int words = report.sentences[s].words;
                        const bool ok = words >= spec.min && (!spec.max || words <= *spec.max);
                        if (!ok)
                            violate(id,
                                    "[" + std::to_string(spec.min) + "," +
                                        (spec.max ? std::to_string(*spec.max) : "inf") + "]",
                                    std::to_string(words));
                    }
                } else if constexpr (std::is_same_v<T, PrefixKeywordSpec>) {
                    if (spec.sentence >= n_sentences) {
                        violate(id, spec.keyword, "missing sentence");
                        return;
                    }
                    auto words = split_sentence_words(report.sentences[spec.sentence].text);
                    const std::string first = words.empty() ? "" : word_core(words.front());
                    if (first != spec.keyword) violate(id, spec.keyword, first);
                } else if constexpr (std::is_same_v<T, ForbiddenWordsSpec>) {
                    std::set<std::string> lowered;
                    for (const auto& w : spec.words) lowered.insert(lowercase(w));
                    for (int s = 0; s < n_sentences; ++s)
                        for (const auto& w : split_sentence_words(report.sentences[s].text)) {
                            const std::string core = lowercase(word_core(w));
                            if (!core.empty() && lowered.count(core))
                                violate(id, "absence of \"" + core + "\"",
                                        "\"" + w + "\" in sentence " + std::to_string(s));
                        }
                } else if constexpr (std::is_same_v<T, LetterExclusionSpec>) {
                    std::set<char> lowered;
                    for (char ch : spec.letters)
                        lowered.insert(
                            static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
                    for (char ch : text) {
                        const char lc =
                            static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
                        if (lowered.count(lc)) {
                            violate(id, "absence of '" + std::string(1, lc) + "'",
                                    "present");
                            break;
                        }
                    }
                }
            },
            c.variant);
    }
    return report;
}

std::string violations_to_json(const ValidationReport& report) {
    nlohmann::json j;
    j["satisfied"] = report.satisfied;
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : report.violations)
        vs.push_back({{"constraint", v.constraint_id},
                      {"expected", v.expected},
                      {"measured", v.measured}});
    j["violations"] = vs;
    nlohmann::json ss = nlohmann::json::array();
    for (const auto& s : report.sentences)
        ss.push_back({{"text", s.text}, {"chars", s.chars}, {"words", s.words}});
    j["sentences"] = ss;
    return j.dump();
}

} // namespace gencp
