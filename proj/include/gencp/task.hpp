#ifndef GENCP_TASK_HPP
#define GENCP_TASK_HPP

#include <optional>
#include <string>
#include <vector>

#include "gencp/constraint_spec.hpp"

namespace gencp {

// Optional per-task generation budget; merged with SearchConfig limits
// (the tighter bound wins).
struct TaskBudget {
    std::optional<long> max_llm_calls;
    std::optional<long> max_solutions;
    std::optional<long> max_wall_ms;

    bool any() const { return max_llm_calls || max_solutions || max_wall_ms; }
    bool operator==(const TaskBudget&) const = default;
};

// A benchmark task: thematic pre-prompt, sentence count, constraint set.
// Constraints carry their own sentence scope; per-sentence and global views
// are derived.
struct TaskSpec {
    std::string name;
    std::string preprompt;
    int sentence_count = 1;
    std::vector<ConstraintSpec> constraints;
    TaskBudget budget;

    bool operator==(const TaskSpec&) const = default;

    // Constraints applying to sentence s (scoped to s or to all sentences),
    // plus the scope-free ones.
    std::vector<ConstraintSpec> constraints_for_sentence(int s) const;
    std::vector<ConstraintSpec> global_constraints() const;

    // Explicit constraint list plus the implied sentence-count constraint.
    std::vector<ConstraintSpec> all_constraints() const;
};

// Throws TaskError on sentence_count < 1, an out-of-range constraint scope,
// or any inconsistent constraint.
void check_task(const TaskSpec& task);

// JSON task-file format: {"name", "preprompt", "sentences",
// "constraints": [{"type", "sentence": int|"all", ...params}]}.
TaskSpec parse_task_file(const std::string& path);
TaskSpec parse_task_json(const std::string& text);
std::string task_to_json(const TaskSpec& task);

} // namespace gencp

#endif
