#ifndef GENCP_SEARCH_CONFIG_HPP
#define GENCP_SEARCH_CONFIG_HPP

#include <optional>
#include <string>

#include "gencp/constraints.hpp"
#include "gencp/state.hpp"

namespace gencp {

// vanilla: every token is its own word (no meta grouping).
// metavar: boundary-rule word grouping, no lookahead.
// previewMLM: metavar plus masked-model domain preview.
enum class Variant { Vanilla, Metavar, PreviewMLM };

std::string variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

struct SearchConfig {
    int top_k = 50;
    double temperature = 0.8;
    int preview_depth = 2;  // d; 0 disables preview
    int mlm_top_k = 50;
    // Preview triggers once the remaining sentence budget is at most this
    // (default: two maximal words).
    int preview_trigger_budget = 2 * (1 + 20);
    std::optional<long> max_llm_calls;
    std::optional<long> max_solutions;
    std::optional<long> max_wall_ms;
    unsigned seed = 0;
    bool restart_on_solution = true;
    std::optional<double> likelihood_floor;  // mean per-token log-likelihood
    Variant variant = Variant::Metavar;
    PropagationConfig propagation;
    CountingRule counting;

    bool any_budget() const { return max_llm_calls || max_solutions || max_wall_ms; }
};

struct Metrics {
    long llm_calls = 0;
    long mlm_calls = 0;
    long backtracks = 0;
    long solutions = 0;
    long nodes_expanded = 0;
    long wall_ms = 0;
};

} // namespace gencp

#endif
