// gencp: constraint-guided text generation over LLM/MLM-proposed domains.
//
// Subcommands:
//   run       solve one task, streaming validated solutions
//   suite     run a (tasks x variants) grid and emit the CSV report
//   validate  check an existing text against a task's constraints

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gencp/bench.hpp"
#include "gencp/clients.hpp"
#include "gencp/errors.hpp"
#include "gencp/mock_lm.hpp"
#include "gencp/search.hpp"

namespace {

using namespace gencp;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNoSolutions = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;

struct CommonOptions {
    std::string builtin;
    std::string task_file;
    std::string backend = "mock";

    std::string variant = "previewMLM";
    int depth = 2;
    int top_k = 50;
    int mlm_top_k = 50;
    double temperature = 0.8;
    long max_llm_calls = -1;
    long max_solutions = -1;
    long max_time_ms = -1;
    unsigned seed = 0;
    bool count_spaces = true;
    bool cache = false;
    bool restart = true;
    double likelihood_floor = std::numeric_limits<double>::quiet_NaN();
    int preview_trigger = 2 * (1 + 20);
    int min_word_cost = 2;
    int max_word_len = 20;
    bool no_timing = false;

    // mock backend
    std::string corpus_file;
    int mock_n = 2;
    double jitter = 0.0;
    bool split_words = false;

    // http backend
    std::string llm_url;
    std::string mlm_url;
    std::string llm_model = "babbage-002";
    std::string mlm_model = "bert-base-cased";

    std::string solutions_path;
    std::string metrics_path;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--builtin", opt.builtin, "Builtin task name (e.g. sent-1, sent1-scaled)");
    cmd->add_option("--task", opt.task_file, "Task file (JSON)");
    cmd->add_option("--backend", opt.backend, "Backend: mock|http")->default_str("mock");
    cmd->add_option("--variant", opt.variant, "vanilla|metavar|previewMLM")
        ->default_str("previewMLM");
    cmd->add_option("--depth", opt.depth, "Preview depth d")->default_val(2);
    cmd->add_option("--top-k", opt.top_k, "Autoregressive top-k")->default_val(50);
    cmd->add_option("--mlm-top-k", opt.mlm_top_k, "Masked-model top-k per mask")
        ->default_val(50);
    cmd->add_option("--temperature", opt.temperature, "Sampling temperature (live backends)")
        ->default_val(0.8);
    cmd->add_option("--max-llm-calls", opt.max_llm_calls, "LLM call budget");
    cmd->add_option("--max-solutions", opt.max_solutions, "Stop after this many solutions");
    cmd->add_option("--max-time-ms", opt.max_time_ms, "Wall-clock budget");
    cmd->add_option("--seed", opt.seed, "Seed (mock jitter)")->default_val(0);
    cmd->add_option("--count-spaces", opt.count_spaces,
                    "Count spaces in per-sentence char totals")
        ->default_val(true);
    cmd->add_option("--cache", opt.cache, "Cache HTTP responses within the run")
        ->default_val(false);
    cmd->add_option("--restart", opt.restart, "Restart search after each solution")
        ->default_val(true);
    cmd->add_option("--likelihood-floor", opt.likelihood_floor,
                    "Backtrack when mean token log-likelihood falls below this");
    cmd->add_option("--preview-trigger", opt.preview_trigger,
                    "Remaining-budget threshold that arms the preview")
        ->default_val(42);
    cmd->add_option("--min-word-cost", opt.min_word_cost,
                    "Cheapest continuation word assumed by the char-sum filter")
        ->default_val(2);
    cmd->add_option("--max-word-len", opt.max_word_len, "Word-length cap for upper bounds")
        ->default_val(20);
    cmd->add_flag("--no-timing", opt.no_timing,
                  "Report wall_ms/elapsed_ms as 0 for reproducible output");

    cmd->add_option("--corpus", opt.corpus_file, "Mock corpus file (default: bundled)");
    cmd->add_option("--mock-n", opt.mock_n, "Mock n-gram order (2|3)")->default_val(2);
    cmd->add_option("--jitter", opt.jitter, "Mock per-seed score jitter")->default_val(0.0);
    cmd->add_flag("--split-words", opt.split_words, "Mock splits long words into sub-tokens");

    cmd->add_option("--llm-url", opt.llm_url, "Completion endpoint base URL");
    cmd->add_option("--mlm-url", opt.mlm_url, "Fill-mask endpoint base URL");
    cmd->add_option("--llm-model", opt.llm_model, "Completion model name");
    cmd->add_option("--mlm-model", opt.mlm_model, "Fill-mask model name");

    cmd->add_option("--solutions", opt.solutions_path, "Solutions file (JSON lines)");
    cmd->add_option("--metrics", opt.metrics_path, "Metrics file (JSON)");
}

TaskSpec resolve_task(const CommonOptions& opt) {
    if (!opt.builtin.empty() && !opt.task_file.empty())
        throw TaskError("give either --builtin or --task, not both");
    if (!opt.builtin.empty()) {
        auto t = find_builtin(opt.builtin);
        if (!t) throw TaskError("unknown builtin task: " + opt.builtin);
        return *t;
    }
    if (!opt.task_file.empty()) return parse_task_file(opt.task_file);
    throw TaskError("a task is required (--builtin NAME or --task FILE)");
}

SearchConfig make_config(const CommonOptions& opt) {
    SearchConfig cfg;
    cfg.top_k = opt.top_k;
    cfg.mlm_top_k = opt.mlm_top_k;
    cfg.temperature = opt.temperature;
    cfg.preview_depth = opt.depth;
    cfg.preview_trigger_budget = opt.preview_trigger;
    if (opt.max_llm_calls >= 0) cfg.max_llm_calls = opt.max_llm_calls;
    if (opt.max_solutions >= 0) cfg.max_solutions = opt.max_solutions;
    if (opt.max_time_ms >= 0) cfg.max_wall_ms = opt.max_time_ms;
    cfg.seed = opt.seed;
    cfg.restart_on_solution = opt.restart;
    if (!std::isnan(opt.likelihood_floor)) cfg.likelihood_floor = opt.likelihood_floor;
    auto v = variant_from_name(opt.variant);
    if (!v) throw TaskError("unknown variant: " + opt.variant);
    cfg.variant = *v;
    if (cfg.variant != Variant::PreviewMLM) cfg.preview_depth = 0;
    cfg.propagation.min_word_cost = opt.min_word_cost;
    cfg.propagation.max_word_len = opt.max_word_len;
    cfg.counting.count_spaces = opt.count_spaces;
    return cfg;
}

struct Backends {
    std::shared_ptr<MockLm> mock;
    std::unique_ptr<CompletionClient> completion;
    std::unique_ptr<FillMaskClient> fill_mask;
    LeftToRightModel* llm = nullptr;
    MaskedModel* mlm = nullptr;
};

Backends make_backends(const CommonOptions& opt, bool need_mlm) {
    Backends b;
    if (opt.backend == "mock") {
        MockOptions mopts;
        mopts.jitter = opt.jitter;
        mopts.split_long_words = opt.split_words;
        const std::string corpus =
            opt.corpus_file.empty() ? default_mock_corpus() : load_corpus_file(opt.corpus_file);
        b.mock = build_mock(corpus, opt.mock_n, opt.seed, mopts);
        b.llm = b.mock.get();
        b.mlm = b.mock.get();
        return b;
    }
    if (opt.backend != "http") throw TaskError("unknown backend: " + opt.backend);
    if (opt.llm_url.empty()) throw TaskError("--backend http requires --llm-url");
    EndpointConfig lcfg;
    lcfg.base_url = opt.llm_url;
    lcfg.api_key_env = "GENCP_LLM_API_KEY";
    lcfg.model_name = opt.llm_model;
    lcfg.cache = opt.cache;
    b.completion = std::make_unique<CompletionClient>(lcfg);
    b.llm = b.completion.get();
    if (need_mlm) {
        if (opt.mlm_url.empty()) throw TaskError("previewMLM over http requires --mlm-url");
        EndpointConfig mcfg;
        mcfg.base_url = opt.mlm_url;
        mcfg.api_key_env = "GENCP_MLM_API_KEY";
        mcfg.model_name = opt.mlm_model;
        mcfg.cache = opt.cache;
        b.fill_mask = std::make_unique<FillMaskClient>(mcfg);
        b.mlm = b.fill_mask.get();
    }
    return b;
}

void print_header(const TaskSpec& task, const SearchConfig& cfg, const CommonOptions& opt) {
    std::cerr << "gencp run: task=" << task.name << " variant=" << variant_name(cfg.variant)
              << " backend=" << opt.backend << "\n"
              << "  top_k=" << cfg.top_k << " temperature=" << cfg.temperature
              << " depth=" << cfg.preview_depth << " mlm_top_k=" << cfg.mlm_top_k
              << " seed=" << cfg.seed << " count_spaces=" << cfg.counting.count_spaces
              << " restart=" << cfg.restart_on_solution << "\n"
              << "  budgets: llm_calls="
              << (cfg.max_llm_calls ? std::to_string(*cfg.max_llm_calls) : "none")
              << " solutions="
              << (cfg.max_solutions ? std::to_string(*cfg.max_solutions) : "none")
              << " wall_ms=" << (cfg.max_wall_ms ? std::to_string(*cfg.max_wall_ms) : "none")
              << "\n"
              << "  note: backtracks count one retraction per wipeout/exhaustion event\n";
}

json metrics_to_json(const Metrics& m, bool include_timing) {
    return json{{"llm_calls", m.llm_calls},     {"mlm_calls", m.mlm_calls},
                {"backtracks", m.backtracks},   {"solutions", m.solutions},
                {"nodes_expanded", m.nodes_expanded},
                {"wall_ms", include_timing ? m.wall_ms : 0}};
}

int cmd_run(const CommonOptions& opt) {
    const TaskSpec task = resolve_task(opt);
    const SearchConfig cfg = make_config(opt);
    Backends backends = make_backends(opt, cfg.variant == Variant::PreviewMLM);
    print_header(task, cfg, opt);

    std::ofstream solutions_file;
    std::ostream* solutions_out = &std::cout;
    if (!opt.solutions_path.empty()) {
        solutions_file.open(opt.solutions_path);
        if (!solutions_file) throw TaskError("cannot open " + opt.solutions_path);
        solutions_out = &solutions_file;
    }

    const bool timing = !opt.no_timing;
    SolutionSink sink = [&](const Solution& sol) {
        json record{{"task", sol.task_name},
                    {"text", sol.text},
                    {"log_likelihood", sol.log_likelihood},
                    {"llm_calls", sol.metrics_at_emit.llm_calls},
                    {"mlm_calls", sol.metrics_at_emit.mlm_calls},
                    {"backtracks", sol.metrics_at_emit.backtracks},
                    {"elapsed_ms", timing ? sol.metrics_at_emit.wall_ms : 0}};
        (*solutions_out) << record.dump() << "\n";
        solutions_out->flush();
    };

    Metrics metrics;
    try {
        metrics = solve(task, cfg, *backends.llm, backends.mlm, sink);
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    }

    const json mj = metrics_to_json(metrics, timing);
    if (!opt.metrics_path.empty()) {
        std::ofstream mf(opt.metrics_path);
        if (!mf) throw TaskError("cannot open " + opt.metrics_path);
        mf << mj.dump(2) << "\n";
    }
    std::cerr << "metrics: " << mj.dump() << "\n";
    return metrics.solutions > 0 ? kExitOk : kExitNoSolutions;
}

int cmd_suite(const CommonOptions& opt, const std::string& tasks_sel,
              const std::string& variants_sel, const std::string& report_path, int jobs) {
    std::vector<TaskSpec> tasks;
    if (tasks_sel == "scaled")
        tasks = scaled_tasks();
    else if (tasks_sel == "builtin")
        tasks = builtin_tasks();
    else {
        std::istringstream in(tasks_sel);
        std::string name;
        while (std::getline(in, name, ',')) {
            if (!opt.task_file.empty()) break;
            auto t = find_builtin(name);
            if (!t) throw TaskError("unknown builtin task: " + name);
            tasks.push_back(std::move(*t));
        }
    }
    if (!opt.task_file.empty()) tasks.push_back(parse_task_file(opt.task_file));
    if (tasks.empty()) throw TaskError("suite: no tasks selected");

    std::vector<Variant> variants;
    {
        std::istringstream in(variants_sel);
        std::string name;
        while (std::getline(in, name, ',')) {
            auto v = variant_from_name(name);
            if (!v) throw TaskError("unknown variant: " + name);
            variants.push_back(*v);
        }
    }
    if (variants.empty()) throw TaskError("suite: no variants selected");

    const SearchConfig cfg = make_config(opt);
    const bool need_mlm =
        std::any_of(variants.begin(), variants.end(),
                    [](Variant v) { return v == Variant::PreviewMLM; });
    Backends backends = make_backends(opt, need_mlm);

    SuiteBackends sb{backends.llm, backends.mlm};
    SuiteOptions so;
    so.include_timing = !opt.no_timing;
    so.jobs = jobs;
    RunReport report;
    try {
        report = run_suite(tasks, variants, cfg, sb, so);
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    }

    const std::string csv = report_to_csv(report);
    if (report_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream rf(report_path);
        if (!rf) throw TaskError("cannot open " + report_path);
        rf << csv;
    }
    return kExitOk;
}

int cmd_validate(const CommonOptions& opt, const std::string& text_path) {
    const TaskSpec task = resolve_task(opt);
    std::ifstream in(text_path);
    if (!in) throw TaskError("cannot open " + text_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();

    CountingRule counting{opt.count_spaces};
    const ValidationReport report = validate_solution(text, task, counting);
    std::cout << violations_to_json(report) << "\n";
    std::cerr << (report.satisfied ? "satisfied" : "violated: " +
                                                       std::to_string(report.violations.size()) +
                                                       " violation(s)")
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gencp: constraint-guided text generation"};
    app.require_subcommand(1);

    CommonOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Solve one task");
    add_common_flags(run, run_opt);

    CommonOptions suite_opt;
    std::string tasks_sel = "scaled";
    std::string variants_sel = "metavar,previewMLM";
    std::string report_path;
    int jobs = 1;
    CLI::App* suite = app.add_subcommand("suite", "Run a task/variant grid");
    add_common_flags(suite, suite_opt);
    suite->add_option("--tasks", tasks_sel, "scaled|builtin|name,name,...")
        ->default_str("scaled");
    suite->add_option("--variants", variants_sel, "Comma-separated variant list")
        ->default_str("metavar,previewMLM");
    suite->add_option("--report", report_path, "Report CSV path (default stdout)");
    suite->add_option("--jobs", jobs, "Parallel suite cells")->default_val(1);

    CommonOptions val_opt;
    std::string text_path;
    CLI::App* validate = app.add_subcommand("validate", "Validate a text against a task");
    add_common_flags(validate, val_opt);
    validate->add_option("--text", text_path, "Text file to validate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (suite->parsed())
            return cmd_suite(suite_opt, tasks_sel, variants_sel, report_path, jobs);
        if (validate->parsed()) return cmd_validate(val_opt, text_path);
    } catch (const BackendError& e) {
        // Configuration-stage backend errors (missing credentials) are usage
        // errors: nothing was sent yet.
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TaskError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
