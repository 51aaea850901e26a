#ifndef GENCP_BENCH_HPP
#define GENCP_BENCH_HPP

#include <memory>
#include <string>
#include <vector>

#include "gencp/lm.hpp"
#include "gencp/search.hpp"
#include "gencp/search_config.hpp"
#include "gencp/task.hpp"

namespace gencp {

// The six reference tasks at their original scale. These targets are only
// meaningful against a hosted model's vocabulary.
std::vector<TaskSpec> builtin_tasks();

// Scaled-down companions of the six tasks, sized for the bundled mock
// corpus so each has plenty of solutions and runs in milliseconds.
std::vector<TaskSpec> scaled_tasks();

// Every task the CLI can name: the six reference tasks plus the scaled set.
std::vector<TaskSpec> all_builtin_tasks();
std::optional<TaskSpec> find_builtin(const std::string& name);

// Fantasy-corpus defaults for mock runs.
const std::string& default_mock_corpus();
SearchConfig scaled_defaults(SearchConfig cfg = {});

struct RunRow {
    std::string task;
    std::string variant;
    int depth = 0;
    long llm_calls = 0;
    long mlm_calls = 0;
    long backtracks = 0;
    long solutions = 0;  // -1 marks a cell that failed with an error
    long wall_ms = 0;
};

struct RunReport {
    std::vector<RunRow> rows;
};

// CSV columns: task,variant,depth,llm_calls,mlm_calls,backtracks,solutions,wall_ms
std::string report_to_csv(const RunReport& report);
RunReport report_from_csv(const std::string& csv);

struct SuiteBackends {
    LeftToRightModel* llm = nullptr;
    MaskedModel* mlm = nullptr;  // required only for previewMLM cells
};

struct SuiteOptions {
    bool include_timing = true;  // false reports wall_ms as 0 (reproducible output)
    int jobs = 1;
    SolutionSink per_solution;   // optional per-solution log
};

// Runs every (task, variant) cell under the same config and seeds; a
// failing cell becomes a row with the error marker and the suite continues.
RunReport run_suite(const std::vector<TaskSpec>& tasks, const std::vector<Variant>& variants,
                    const SearchConfig& cfg, const SuiteBackends& backends,
                    const SuiteOptions& options = {});

} // namespace gencp

#endif
