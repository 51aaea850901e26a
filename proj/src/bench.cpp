#include "gencp/bench.hpp"

#include <future>
#include <sstream>

#include "gencp/errors.hpp"

namespace gencp {

namespace {

const char* kFantasyPreprompt =
    "Amidst the crimson glow of a setting sun, a lone warrior, clad in "
    "battle-worn silver, stood atop the ancient ruins, his blade gleaming "
    "with the promise of legend.";

// Small fantasy corpus for mock runs. Sentence order matters: it trains the
// bigrams that make the scaled keyword task reachable ("... dusk. Kingdoms
// ...", "... night. Barbarians ...").
const char* kMockCorpus =
    "The knight rode into the dark wood. "
    "A dragon slept on a bed of gold. "
    "The squire ran to the old gate. "
    "His blade cut the cold night air. "
    "Dragons circled the high tower at dusk. "
    "Kingdoms fell in a single night. "
    "Barbarians broke the iron gate at dawn. "
    "A king sent his men to the wall. "
    "The men rode hard into the night. "
    "His sword rang on the stone floor. "
    "The dark wood hid a narrow path. "
    "A lone wolf howled near the ruins. "
    "The old king wore a crown of iron. "
    "Smoke rose over the burning keep. "
    "Cold rain fell on the silent field. "
    "Riders came down from the high pass. "
    "A raven flew over the broken wall. "
    "The gold lay deep under the hill. "
    "Stone walls rose over the green vale. "
    "Fire lit the sky over the keep.";

const char* kScaledPreprompt = "The knight rode into the dark wood.";

} // namespace

std::vector<TaskSpec> builtin_tasks() {
    std::vector<TaskSpec> tasks;

    TaskSpec sent1;
    sent1.name = "sent-1";
    sent1.preprompt = kFantasyPreprompt;
    sent1.sentence_count = 1;
    sent1.constraints = {make_char_sum(SentenceScope{}, 82, 82)};
    tasks.push_back(std::move(sent1));

    TaskSpec para2;
    para2.name = "para-2";
    para2.preprompt = kFantasyPreprompt;
    para2.sentence_count = 2;
    para2.constraints = {make_word_count(SentenceScope{}, 10, 15),
                         make_char_sum(SentenceScope{}, 60, 60)};
    tasks.push_back(std::move(para2));

    TaskSpec para3;
    para3.name = "para-3";
    para3.preprompt = kFantasyPreprompt;
    para3.sentence_count = 3;
    para3.constraints = {make_word_count(SentenceScope{}, 15)};
    tasks.push_back(std::move(para3));

    TaskSpec para4;
    para4.name = "para-4";
    para4.preprompt = kFantasyPreprompt;
    para4.sentence_count = 2;
    para4.constraints = {make_word_count(SentenceScope{}, 14, 14),
                         make_char_sum(SentenceScope{}, 72, 74)};
    tasks.push_back(std::move(para4));

    TaskSpec para5;
    para5.name = "para-5";
    para5.preprompt = kFantasyPreprompt;
    para5.sentence_count = 3;
    para5.constraints = {make_prefix_keyword(0, "Dragons"),
                         make_prefix_keyword(1, "Kingdoms"),
                         make_prefix_keyword(2, "Barbarians")};
    tasks.push_back(std::move(para5));

    TaskSpec para6;
    para6.name = "para-6";
    para6.preprompt = kFantasyPreprompt;
    para6.sentence_count = 4;
    para6.constraints = {make_forbidden_words({"the", "and", "of"})};
    tasks.push_back(std::move(para6));

    return tasks;
}

std::vector<TaskSpec> scaled_tasks() {
    std::vector<TaskSpec> tasks;

    TaskSpec sent1;
    sent1.name = "sent1-scaled";
    sent1.preprompt = kScaledPreprompt;
    sent1.sentence_count = 1;
    sent1.constraints = {make_char_sum(SentenceScope{}, 24, 24)};
    tasks.push_back(std::move(sent1));

    TaskSpec para2;
    para2.name = "para2-scaled";
    para2.preprompt = kScaledPreprompt;
    para2.sentence_count = 2;
    para2.constraints = {make_word_count(SentenceScope{}, 3, 5),
                         make_char_sum(SentenceScope{}, 21, 23)};
    tasks.push_back(std::move(para2));

    TaskSpec para3;
    para3.name = "para3-scaled";
    para3.preprompt = kScaledPreprompt;
    para3.sentence_count = 3;
    para3.constraints = {make_word_count(SentenceScope{}, 4)};
    para3.budget.max_llm_calls = 4000;
    tasks.push_back(std::move(para3));

    TaskSpec para4;
    para4.name = "para4-scaled";
    para4.preprompt = kScaledPreprompt;
    para4.sentence_count = 2;
    para4.constraints = {make_word_count(SentenceScope{}, 4, 4),
                         make_char_sum(SentenceScope{}, 24, 26)};
    tasks.push_back(std::move(para4));

    TaskSpec para5;
    para5.name = "para5-scaled";
    para5.preprompt = kScaledPreprompt;
    para5.sentence_count = 3;
    para5.constraints = {make_prefix_keyword(0, "Dragons"),
                         make_prefix_keyword(1, "Kingdoms"),
                         make_prefix_keyword(2, "Barbarians")};
    para5.budget.max_llm_calls = 4000;
    tasks.push_back(std::move(para5));

    TaskSpec para6;
    para6.name = "para6-scaled";
    para6.preprompt = kScaledPreprompt;
    para6.sentence_count = 4;
    para6.constraints = {make_forbidden_words({"the", "and", "of"})};
    para6.budget.max_llm_calls = 4000;
    tasks.push_back(std::move(para6));

    return tasks;
}

std::vector<TaskSpec> all_builtin_tasks() {
    std::vector<TaskSpec> tasks = builtin_tasks();
    std::vector<TaskSpec> scaled = scaled_tasks();
    tasks.insert(tasks.end(), scaled.begin(), scaled.end());
    return tasks;
}

std::optional<TaskSpec> find_builtin(const std::string& name) {
    for (TaskSpec& t : all_builtin_tasks())
        if (t.name == name) return std::move(t);
    return std::nullopt;
}

const std::string& default_mock_corpus() {
    static const std::string corpus = kMockCorpus;
    return corpus;
}

SearchConfig scaled_defaults(SearchConfig cfg) {
    cfg.top_k = 8;
    cfg.mlm_top_k = 256;  // covers the whole mock vocabulary
    cfg.preview_trigger_budget = 22;
    return cfg;
}

std::string report_to_csv(const RunReport& report) {
    std::ostringstream out;
    out << "task,variant,depth,llm_calls,mlm_calls,backtracks,solutions,wall_ms\n";
    for (const RunRow& r : report.rows)
        out << r.task << ',' << r.variant << ',' << r.depth << ',' << r.llm_calls << ','
            << r.mlm_calls << ',' << r.backtracks << ',' << r.solutions << ','
            << r.wall_ms << '\n';
    return out.str();
}

RunReport report_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) ||
        line != "task,variant,depth,llm_calls,mlm_calls,backtracks,solutions,wall_ms")
        throw ParseError("report csv: bad header");
    RunReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw ParseError("report csv: expected 8 fields: " + line);
        RunRow r;
        r.task = fields[0];
        r.variant = fields[1];
        try {
            r.depth = std::stoi(fields[2]);
            r.llm_calls = std::stol(fields[3]);
            r.mlm_calls = std::stol(fields[4]);
            r.backtracks = std::stol(fields[5]);
            r.solutions = std::stol(fields[6]);
            r.wall_ms = std::stol(fields[7]);
        } catch (const std::exception&) {
            throw ParseError("report csv: bad number in: " + line);
        }
        report.rows.push_back(std::move(r));
    }
    return report;
}

namespace {

RunRow run_cell(const TaskSpec& task, Variant variant, SearchConfig cfg,
                const SuiteBackends& backends, const SuiteOptions& options) {
    cfg.variant = variant;
    RunRow row;
    row.task = task.name;
    row.variant = variant_name(variant);
    row.depth = variant == Variant::PreviewMLM ? cfg.preview_depth : 0;
    try {
        MaskedModel* mlm = variant == Variant::PreviewMLM ? backends.mlm : nullptr;
        Metrics m = solve(task, cfg, *backends.llm, mlm, options.per_solution);
        row.llm_calls = m.llm_calls;
        row.mlm_calls = m.mlm_calls;
        row.backtracks = m.backtracks;
        row.solutions = m.solutions;
        row.wall_ms = options.include_timing ? m.wall_ms : 0;
    } catch (const std::exception&) {
        row.solutions = -1;  // error marker; the suite continues
    }
    return row;
}

} // namespace

RunReport run_suite(const std::vector<TaskSpec>& tasks, const std::vector<Variant>& variants,
                    const SearchConfig& cfg, const SuiteBackends& backends,
                    const SuiteOptions& options) {
    if (!backends.llm) throw ContractViolation("run_suite: missing autoregressive backend");
    RunReport report;
    if (options.jobs > 1) {
        std::vector<std::future<RunRow>> cells;
        for (const TaskSpec& task : tasks)
            for (Variant variant : variants)
                cells.push_back(std::async(std::launch::async, run_cell, std::cref(task),
                                           variant, cfg, std::cref(backends),
                                           std::cref(options)));
        for (auto& c : cells) report.rows.push_back(c.get());
    } else {
        for (const TaskSpec& task : tasks)
            for (Variant variant : variants)
                report.rows.push_back(run_cell(task, variant, cfg, backends, options));
    }
    return report;
}

} // namespace gencp
