#ifndef GENCP_PREVIEW_HPP
#define GENCP_PREVIEW_HPP

#include <optional>
#include <set>
#include <vector>

#include "gencp/constraints.hpp"
#include "gencp/lm.hpp"
#include "gencp/search_config.hpp"
#include "gencp/state.hpp"
#include "gencp/task.hpp"

namespace gencp {

// Masked-model lookahead over the next `depth` word positions. Costs are
// rendered char contributions and include the word's leading separator.
struct PreviewSnapshot {
    int depth = 0;
    std::vector<Domain> domains;             // word granularity, best first
    std::vector<std::set<int>> length_sets;  // candidate costs per position
    std::vector<std::set<int>> closing_sets; // costs of sentence-ending candidates
};

struct PreviewResult {
    std::optional<PreviewSnapshot> snapshot;  // absent on wipeout
    int wiped_position = -1;

    bool wiped_out() const { return !snapshot.has_value(); }
};

// Admissible sum window for the remaining sentence budget; an exact target
// has lo == hi.
struct BudgetWindow {
    int lo = 0;
    int hi = 0;
};

// Cost tuples admissible for the previewed positions. `universal` stands
// for "no char-sum constraint active": no filtering.
struct AdmissibleSums {
    bool universal = false;
    std::set<std::vector<int>> tuples;
};

// True when the current sentence carries a char-sum constraint and its
// remaining budget has shrunk to cfg.preview_trigger_budget or less.
bool should_preview(const CspState& state, const TaskSpec& task, const SearchConfig& cfg);

// The char-sum constraint governing the current sentence, if any.
const CharSumSpec* active_char_sum(const CspState& state, const TaskSpec& task);

// Queries the masked model once for d word domains after the current text,
// filters each with the task's global lexical constraints, and reports a
// wipeout when any previewed domain empties.
PreviewResult preview_domains(const CspState& state, MaskedModel& mlm,
                              const std::string& preprompt, int d, int k);

// All depth-length tuples drawn from the snapshot's length sets whose sum
// lands inside the window.
AdmissibleSums admissible_sums(const PreviewSnapshot& snapshot, BudgetWindow window);
AdmissibleSums admissible_sums(const PreviewSnapshot& snapshot, int exact_budget);

// Keeps a candidate iff its char length appears as the first coordinate of
// some admissible tuple; survivor order is unchanged. Universal sums pass
// everything through.
Domain join_filter(const Domain& current, const PreviewSnapshot& snapshot,
                   const AdmissibleSums& sums);

// Sound admissible cost set for the word at the first previewed position:
// a cost c is admissible when some completion starting with c closes the
// sentence within the previewed window at a sentence-ending previewed cost,
// or traverses the whole window leaving room for at least one more word.
// `word_slots`, when known (word-count maximum), caps how many words the
// completion may still use; the exactly-d-remaining case then reproduces
// the pure Cartesian pair filter.
std::set<int> admissible_first_costs(const PreviewSnapshot& snapshot, BudgetWindow window,
                                     int min_word_cost,
                                     std::optional<int> word_slots = std::nullopt);

// Future-position length sets (everything after the first previewed
// position) in the shape the char-sum propagator consumes.
FutureLengthSets future_sets_after_first(const PreviewSnapshot& snapshot);

} // namespace gencp

#endif
