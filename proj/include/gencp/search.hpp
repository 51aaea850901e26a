#ifndef GENCP_SEARCH_HPP
#define GENCP_SEARCH_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "gencp/constraints.hpp"
#include "gencp/lm.hpp"
#include "gencp/preview.hpp"
#include "gencp/search_config.hpp"
#include "gencp/state.hpp"
#include "gencp/task.hpp"

namespace gencp {

struct Solution {
    std::string text;
    double log_likelihood = 0.0;   // sum of assigned token scores
    Metrics metrics_at_emit;
    std::string task_name;
    std::string serialized;        // token encoding of the assignment
};

using SolutionSink = std::function<void(const Solution&)>;

// Test instrumentation; all optional.
struct SearchHooks {
    std::function<void(int remaining_budget)> on_preview;
    std::function<void(double prefix_mean_loglik)> on_expand;
};

// Highest-scored candidate not yet tried, or nothing when exhausted.
std::optional<Token> select_value(const Domain& domain, const std::set<std::string>& tried);

enum class SolutionAction { Continue, Restart, Stop };

// Restart policy applied right after a solution is emitted.
SolutionAction on_solution(const CspState& state, const SearchConfig& cfg,
                           long solutions_so_far);

// The main loop: extend a variable, preview (previewMLM only), generate its
// domain, propagate, assign in likelihood order, backtrack chronologically
// on wipeout/exhaustion, emit validated solutions, restart per policy.
// Runs until a budget is exhausted or the search space is closed.
Metrics solve(const TaskSpec& task, const SearchConfig& cfg, LeftToRightModel& llm,
              MaskedModel* mlm, const SolutionSink& sink, const SearchHooks& hooks = {});

} // namespace gencp

#endif
