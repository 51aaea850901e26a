#include "gencp/preview.hpp"

#include <algorithm>
#include <cctype>

#include "gencp/errors.hpp"

namespace gencp {

namespace {

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Previewed words are whole hypothetical words: a global lexical constraint
// can reject them outright regardless of position.
bool previewed_word_allowed(const Token& word, const std::vector<ConstraintSpec>& constraints) {
    for (const ConstraintSpec& c : constraints) {
        if (const auto* le = std::get_if<LetterExclusionSpec>(&c.variant)) {
            for (char ch : word.surface) {
                const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
                for (char ex : le->letters)
                    if (lc == static_cast<char>(std::tolower(static_cast<unsigned char>(ex))))
                        return false;
            }
        } else if (const auto* fw = std::get_if<ForbiddenWordsSpec>(&c.variant)) {
            std::string core = lowercase(word_core(word.surface));
            if (core.empty()) continue;
            for (const auto& w : fw->words)
                if (lowercase(w) == core) return false;
        }
    }
    return true;
}

} // namespace

const CharSumSpec* active_char_sum(const CspState& state, const TaskSpec& task) {
    for (const ConstraintSpec& c : task.constraints)
        if (const auto* cs = std::get_if<CharSumSpec>(&c.variant))
            if (cs->scope.applies_to(state.sentence_index)) return cs;
    return nullptr;
}

bool should_preview(const CspState& state, const TaskSpec& task, const SearchConfig& cfg) {
    const CharSumSpec* cs = active_char_sum(state, task);
    if (!cs) return false;
    const int remaining = cs->target_max - state.sentence_char_used;
    return remaining <= cfg.preview_trigger_budget;
}

namespace {

int nonspace_count(const std::string& s) {
    int n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80 && c != static_cast<unsigned char>(kSeparator)) ++n;
    return n;
}

} // namespace

PreviewResult preview_domains(const CspState& state, MaskedModel& mlm,
                              const std::string& preprompt, int d, int k) {
    if (d < 1) throw ContractViolation("preview_domains: d must be >= 1");
    const MaskedPrompt prompt = build_masked_prompt(state, preprompt, d);
    std::vector<Domain> raw = mlm.fill_mask_domains(prompt, k);

    // Length sets hold rendered contributions so they line up with the
    // candidate costs the propagators compute: a word's separator counts
    // except at the sentence-initial position (and spaces may not count at
    // all under the alternate rule).
    auto cost_of = [&](const Token& w, std::size_t pos) {
        if (!state.counting.count_spaces) return nonspace_count(w.surface);
        int c = w.char_len;
        if (pos == 0 && state.at_sentence_start && w.starts_word) c -= 1;
        return c;
    };

    PreviewResult result;
    PreviewSnapshot snap;
    snap.depth = d;
    for (std::size_t pos = 0; pos < raw.size(); ++pos) {
        Domain filtered;
        filtered.source = raw[pos].source;
        for (const Token& w : raw[pos].candidates)
            if (previewed_word_allowed(w, state.constraints))
                filtered.candidates.push_back(w);
        if (filtered.empty()) {
            result.wiped_position = static_cast<int>(pos);
            return result;
        }
        std::set<int> lengths, closing;
        for (const Token& w : filtered.candidates) {
            const int c = cost_of(w, pos);
            lengths.insert(c);
            if (w.ends_sentence) closing.insert(c);
        }
        snap.length_sets.push_back(std::move(lengths));
        snap.closing_sets.push_back(std::move(closing));
        snap.domains.push_back(std::move(filtered));
    }
    result.snapshot = std::move(snap);
    return result;
}

AdmissibleSums admissible_sums(const PreviewSnapshot& snapshot, BudgetWindow window) {
    AdmissibleSums sums;
    std::vector<int> tuple;
    auto recurse = [&](auto&& self, std::size_t pos, int acc) -> void {
        if (pos == snapshot.length_sets.size()) {
            if (acc >= window.lo && acc <= window.hi) sums.tuples.insert(tuple);
            return;
        }
        for (int c : snapshot.length_sets[pos]) {
            if (acc + c > window.hi) continue;
            tuple.push_back(c);
            self(self, pos + 1, acc + c);
            tuple.pop_back();
        }
    };
    recurse(recurse, 0, 0);
    return sums;
}

AdmissibleSums admissible_sums(const PreviewSnapshot& snapshot, int exact_budget) {
    return admissible_sums(snapshot, BudgetWindow{exact_budget, exact_budget});
}

Domain join_filter(const Domain& current, const PreviewSnapshot&, const AdmissibleSums& sums) {
    if (sums.universal) return current;
    std::set<int> first_costs;
    for (const auto& t : sums.tuples)
        if (!t.empty()) first_costs.insert(t.front());
    Domain out;
    out.source = current.source;
    out.under_k = current.under_k;
    for (const Token& v : current.candidates)
        if (first_costs.count(v.char_len)) out.candidates.push_back(v);
    return out;
}

std::set<int> admissible_first_costs(const PreviewSnapshot& snapshot, BudgetWindow window,
                                     int min_word_cost, std::optional<int> word_slots) {
    std::set<int> admissible;
    if (snapshot.length_sets.empty()) return admissible;
    const std::size_t depth = snapshot.length_sets.size();
    auto slots_allow = [&](std::size_t words_used) {
        return !word_slots || words_used <= static_cast<std::size_t>(*word_slots);
    };

    for (int first : snapshot.length_sets[0]) {
        if (first > window.hi) continue;
        // Close at the first position itself (one word used).
        bool ok = slots_allow(1) && snapshot.closing_sets[0].count(first) &&
                  first >= window.lo && first <= window.hi;
        // Close at a deeper previewed position (pos+1 words used), or leave
        // the window with room for at least one more word (> depth words).
        std::set<int> reachable{first};
        for (std::size_t pos = 1; !ok && pos < depth; ++pos) {
            std::set<int> next;
            for (int acc : reachable) {
                if (slots_allow(pos + 1))
                    for (int close_cost : snapshot.closing_sets[pos]) {
                        const int total = acc + close_cost;
                        if (total >= window.lo && total <= window.hi) {
                            ok = true;
                            break;
                        }
                    }
                if (ok) break;
                for (int c : snapshot.length_sets[pos])
                    if (acc + c <= window.hi) next.insert(acc + c);
            }
            reachable = std::move(next);
            if (reachable.empty()) break;
        }
        if (!ok && slots_allow(depth + 1))
            for (int acc : reachable)
                if (acc + min_word_cost <= window.hi) {
                    ok = true;
                    break;
                }
        if (ok) admissible.insert(first);
    }
    return admissible;
}

FutureLengthSets future_sets_after_first(const PreviewSnapshot& snapshot) {
    FutureLengthSets fut;
    for (std::size_t pos = 1; pos < snapshot.length_sets.size(); ++pos) {
        fut.any.push_back(snapshot.length_sets[pos]);
        fut.closing.push_back(snapshot.closing_sets[pos]);
    }
    return fut;
}

} // namespace gencp
