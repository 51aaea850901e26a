#include "gencp/search.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "gencp/errors.hpp"

namespace gencp {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Vanilla: return "vanilla";
        case Variant::Metavar: return "metavar";
        case Variant::PreviewMLM: return "previewMLM";
    }
    return "unknown";
}

std::optional<Variant> variant_from_name(const std::string& name) {
    if (name == "vanilla") return Variant::Vanilla;
    if (name == "metavar") return Variant::Metavar;
    if (name == "previewMLM") return Variant::PreviewMLM;
    return std::nullopt;
}

std::optional<Token> select_value(const Domain& domain, const std::set<std::string>& tried) {
    for (const Token& t : domain.candidates)
        if (!tried.count(t.surface)) return t;
    return std::nullopt;
}

SolutionAction on_solution(const CspState&, const SearchConfig& cfg, long solutions_so_far) {
    if (cfg.max_solutions && solutions_so_far >= *cfg.max_solutions)
        return SolutionAction::Stop;
    return cfg.restart_on_solution ? SolutionAction::Restart : SolutionAction::Continue;
}

namespace {

struct Node {
    int var_id = 0;
    Domain domain;                 // propagated, cached for re-descent
    std::set<std::string> tried;
};

// Per-run limits: the tighter of config and task budget.
struct Limits {
    std::optional<long> llm_calls;
    std::optional<long> solutions;
    std::optional<long> wall_ms;

    static std::optional<long> tighter(std::optional<long> a, std::optional<long> b) {
        if (a && b) return std::min(*a, *b);
        return a ? a : b;
    }
};

class Searcher {
public:
    Searcher(const TaskSpec& task, const SearchConfig& cfg, LeftToRightModel& llm,
             MaskedModel* mlm, const SolutionSink& sink, const SearchHooks& hooks)
        : task_(task),
          cfg_(cfg),
          llm_(llm),
          mlm_(mlm),
          sink_(sink),
          hooks_(hooks),
          state_(init_state(task, cfg.counting, cfg.variant == Variant::Vanilla
                                                    ? Grouping::TokenPerWord
                                                    : Grouping::BoundaryRule)),
          started_(std::chrono::steady_clock::now()) {
        limits_.llm_calls = Limits::tighter(cfg.max_llm_calls, task.budget.max_llm_calls);
        limits_.solutions = Limits::tighter(cfg.max_solutions, task.budget.max_solutions);
        limits_.wall_ms = Limits::tighter(cfg.max_wall_ms, task.budget.max_wall_ms);
        if (cfg.variant == Variant::PreviewMLM) {
            if (!mlm_) throw ContractViolation("previewMLM requires a masked backend");
            if (cfg.preview_depth < 1)
                throw ContractViolation("previewMLM requires preview_depth >= 1");
        }
    }

    Metrics run() {
        while (step()) {
        }
        metrics_.wall_ms = elapsed_ms();
        return metrics_;
    }

private:
    long elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - started_)
            .count();
    }

    bool budget_left() const {
        if (limits_.llm_calls && metrics_.llm_calls >= *limits_.llm_calls) return false;
        if (limits_.wall_ms && elapsed_ms() >= *limits_.wall_ms) return false;
        return true;
    }

    bool complete() const { return state_.sentence_index >= task_.sentence_count; }

    // One solver step; false terminates the run.
    bool step() {
        if (complete()) return handle_leaf();
        if (!budget_left()) return false;
        return expand();
    }

    bool handle_leaf() {
        const std::string text = render_text(state_);
        const ValidationReport report = validate_solution(text, task_, cfg_.counting);
        if (!report.satisfied) return fail_leaf();

        metrics_.solutions += 1;
        Solution sol;
        sol.text = text;
        sol.task_name = task_.name;
        sol.serialized = serialize_assignment(state_);
        for (const TrailEntry& e : state_.trail) sol.log_likelihood += e.token.score;
        sol.metrics_at_emit = metrics_;
        sol.metrics_at_emit.wall_ms = elapsed_ms();
        if (sink_) sink_(sol);

        if (limits_.solutions && metrics_.solutions >= *limits_.solutions) return false;
        switch (on_solution(state_, cfg_, metrics_.solutions)) {
            case SolutionAction::Stop:
                return false;
            case SolutionAction::Restart:
                nogoods_.insert(sol.serialized);
                return restart();
            case SolutionAction::Continue:
                // Step past this leaf: retract its last assignment (not a
                // failure, not counted) and resume at the parent node.
                return step_past_leaf();
        }
        return false;
    }

    // A completed text that fails validation is a dead end.
    bool fail_leaf() {
        if (nodes_.empty()) return false;
        retract_last(state_);
        metrics_.backtracks += 1;
        return descend();
    }

    bool step_past_leaf() {
        if (nodes_.empty()) return false;
        retract_last(state_);
        return descend();
    }

    bool restart() {
        while (!state_.trail.empty()) retract_last(state_);
        while (!state_.variables.empty()) drop_last_variable(state_);
        nodes_.clear();
        return true;
    }

    // Creates the next node: preview, one LLM call, propagation. Returns
    // false when the whole search is exhausted.
    bool expand() {
        const int var = extend_variable(state_);
        metrics_.nodes_expanded += 1;
        if (hooks_.on_expand) hooks_.on_expand(prefix_mean());

        std::optional<PreviewSnapshot> snapshot;
        if (cfg_.variant == Variant::PreviewMLM && should_preview(state_, task_, cfg_)) {
            if (hooks_.on_preview) {
                const CharSumSpec* cs = active_char_sum(state_, task_);
                hooks_.on_preview(cs ? cs->target_max - state_.sentence_char_used : -1);
            }
            metrics_.mlm_calls += 1;
            PreviewResult pre = preview_domains(state_, *mlm_, task_.preprompt,
                                                cfg_.preview_depth, cfg_.mlm_top_k);
            if (pre.wiped_out()) {
                drop_last_variable(state_);
                return backtrack();
            }
            snapshot = std::move(pre.snapshot);
        }

        const LeftPrompt prompt = build_left_prompt(state_, task_.preprompt);
        metrics_.llm_calls += 1;
        Domain domain = llm_.next_token_domain(prompt, cfg_.top_k, cfg_.temperature);

        PropagationResult propagated =
            propagate_all(state_, task_, domain, cfg_.propagation);
        Domain filtered = std::move(propagated.filtered);
        if (snapshot) filtered = preview_filter(filtered, *snapshot);

        if (filtered.empty()) {
            drop_last_variable(state_);
            return backtrack();
        }
        set_domain(state_, var, filtered);
        Node node;
        node.var_id = var;
        node.domain = std::move(filtered);
        nodes_.push_back(std::move(node));
        return descend();
    }

    // Applies the previewed admissible costs to word-opening candidates.
    // Sentence closers were already window-checked by the char-sum
    // propagator; continuation tokens extend the open word and are judged
    // by the propagator alone.
    Domain preview_filter(const Domain& domain, const PreviewSnapshot& snapshot) {
        const CharSumSpec* cs = active_char_sum(state_, task_);
        if (!cs) return domain;
        const BudgetWindow window{cs->target_min - state_.sentence_char_used,
                                  cs->target_max - state_.sentence_char_used};
        const std::set<int> first_costs = admissible_first_costs(
            snapshot, window, cfg_.propagation.min_word_cost, remaining_word_slots());
        const bool subword = llm_.subword_tokens();

        Domain out;
        out.source = domain.source;
        out.under_k = domain.under_k;
        for (const Token& v : domain.candidates) {
            if (v.ends_sentence || !state_.opens_word(v)) {
                out.candidates.push_back(v);
                continue;
            }
            const int c = state_.contribution(v);
            bool keep;
            if (subword)
                // The token may be a word prefix; any admissible cost at or
                // above it can still be reached by continuations.
                keep = !first_costs.empty() && *first_costs.rbegin() >= c;
            else
                keep = first_costs.count(c) > 0;
            if (keep) out.candidates.push_back(v);
        }
        return out;
    }

    // Picks the next untried value at the top node; walks back up when a
    // node is exhausted. Returns false when the root exhausts.
    bool descend() {
        while (!nodes_.empty()) {
            Node& node = nodes_.back();
            std::optional<Token> pick;
            while (true) {
                pick = select_value(node.domain, node.tried);
                if (!pick) break;
                node.tried.insert(pick->surface);
                if (rejected_by_floor(*pick) || rejected_by_nogood(*pick)) continue;
                break;
            }
            if (pick) {
                assign_token(state_, node.var_id, *pick);
                return true;
            }
            nodes_.pop_back();
            drop_last_variable(state_);
            if (nodes_.empty()) return false;  // root exhausted
            retract_last(state_);
            metrics_.backtracks += 1;
        }
        return false;
    }

    // Wipeout path: the newest variable was dropped; undo the parent
    // assignment and move it to its next value.
    bool backtrack() {
        if (nodes_.empty()) return false;
        retract_last(state_);
        metrics_.backtracks += 1;
        return descend();
    }

    // Words still startable in this sentence under a word-count maximum.
    std::optional<int> remaining_word_slots() const {
        std::optional<int> slots;
        for (const auto& c : task_.constraints_for_sentence(state_.sentence_index)) {
            const auto* wc = std::get_if<WordCountSpec>(&c.variant);
            if (!wc || !wc->max) continue;
            int used = state_.sentence_word_count;
            if (const MetaVariable* open = state_.open_meta()) {
                const bool any_alnum =
                    std::any_of(open->word.begin(), open->word.end(), [](unsigned char ch) {
                        return std::isalnum(ch);
                    });
                if (any_alnum) used += 1;
            }
            slots = std::max(0, *wc->max - used);
        }
        return slots;
    }

    double prefix_mean() const {
        if (state_.trail.empty()) return 0.0;
        double sum = 0.0;
        for (const TrailEntry& e : state_.trail) sum += e.token.score;
        return sum / static_cast<double>(state_.trail.size());
    }

    bool rejected_by_floor(const Token& pick) const {
        if (!cfg_.likelihood_floor) return false;
        double sum = pick.score;
        for (const TrailEntry& e : state_.trail) sum += e.token.score;
        const double mean = sum / static_cast<double>(state_.trail.size() + 1);
        return mean < *cfg_.likelihood_floor;
    }

    bool rejected_by_nogood(const Token& pick) const {
        if (nogoods_.empty()) return false;
        if (pick.surface.find(';') != std::string::npos) return false;
        return nogoods_.count(serialize_assignment(state_) + pick.surface + ";") > 0;
    }

    const TaskSpec& task_;
    SearchConfig cfg_;
    LeftToRightModel& llm_;
    MaskedModel* mlm_;
    const SolutionSink& sink_;
    const SearchHooks& hooks_;
    CspState state_;
    std::vector<Node> nodes_;
    std::set<std::string> nogoods_;
    Metrics metrics_;
    Limits limits_;
    std::chrono::steady_clock::time_point started_;
};

} // namespace

Metrics solve(const TaskSpec& task, const SearchConfig& cfg, LeftToRightModel& llm,
              MaskedModel* mlm, const SolutionSink& sink, const SearchHooks& hooks) {
    Searcher searcher(task, cfg, llm, mlm, sink, hooks);
    return searcher.run();
}

} // namespace gencp
