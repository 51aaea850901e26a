#include "gencp/task.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gencp/errors.hpp"

namespace gencp {

using nlohmann::json;

std::vector<ConstraintSpec> TaskSpec::constraints_for_sentence(int s) const {
    std::vector<ConstraintSpec> out;
    for (const auto& c : constraints) {
        bool applies = std::visit(
            [&](const auto& spec) -> bool {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, CharSumSpec> ||
                              std::is_same_v<T, WordCountSpec>)
                    return spec.scope.applies_to(s);
                else if constexpr (std::is_same_v<T, PrefixKeywordSpec>)
                    return spec.sentence == s;
                else
                    return true;  // scope-free constraints apply everywhere
            },
            c.variant);
        if (applies) out.push_back(c);
    }
    return out;
}

std::vector<ConstraintSpec> TaskSpec::global_constraints() const {
    std::vector<ConstraintSpec> out;
    for (const auto& c : constraints) {
        bool global = std::visit(
            [](const auto& spec) -> bool {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, CharSumSpec> ||
                              std::is_same_v<T, WordCountSpec>)
                    return spec.scope.all();
                else if constexpr (std::is_same_v<T, PrefixKeywordSpec>)
                    return false;
                else
                    return true;
            },
            c.variant);
        if (global) out.push_back(c);
    }
    return out;
}

std::vector<ConstraintSpec> TaskSpec::all_constraints() const {
    std::vector<ConstraintSpec> out = constraints;
    out.push_back(make_sentence_count(sentence_count));
    return out;
}

void check_task(const TaskSpec& task) {
    if (task.sentence_count < 1)
        throw TaskError("task '" + task.name + "': sentence count must be >= 1");
    for (const auto& c : task.constraints) {
        check_constraint(c);
        std::visit(
            [&](const auto& spec) {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, CharSumSpec> ||
                              std::is_same_v<T, WordCountSpec>) {
                    if (!spec.scope.all() && spec.scope.ordinal >= task.sentence_count)
                        throw TaskError("constraint scope beyond sentence count");
                } else if constexpr (std::is_same_v<T, PrefixKeywordSpec>) {
                    if (spec.sentence >= task.sentence_count)
                        throw TaskError("prefix keyword sentence beyond sentence count");
                }
            },
            c.variant);
    }
}

namespace {

SentenceScope scope_from_json(const json& j, const std::string& ctx) {
    if (!j.contains("sentence")) return SentenceScope{};
    const json& s = j.at("sentence");
    if (s.is_string()) {
        if (s.get<std::string>() == "all") return SentenceScope{};
        throw ParseError(ctx + ": sentence must be an integer or \"all\"");
    }
    if (!s.is_number_integer())
        throw ParseError(ctx + ": sentence must be an integer or \"all\"");
    return SentenceScope{s.get<int>()};
}

json scope_to_json(SentenceScope s) {
    if (s.all()) return json("all");
    return json(s.ordinal);
}

ConstraintSpec constraint_from_json(const json& j, std::size_t index) {
    const std::string ctx = "constraints[" + std::to_string(index) + "]";
    if (!j.is_object() || !j.contains("type"))
        throw ParseError(ctx + ": expected an object with a \"type\" field");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "char_sum") {
            int mn = j.at("min").get<int>();
            int mx = j.contains("max") ? j.at("max").get<int>() : mn;
            return make_char_sum(scope_from_json(j, ctx), mn, mx);
        }
        if (type == "word_count") {
            int mn = j.contains("min") ? j.at("min").get<int>() : 0;
            std::optional<int> mx;
            if (j.contains("max")) mx = j.at("max").get<int>();
            return make_word_count(scope_from_json(j, ctx), mn, mx);
        }
        if (type == "prefix_keyword") {
            const json& s = j.at("sentence");
            if (!s.is_number_integer())
                throw ParseError(ctx + ": prefix_keyword needs an integer sentence");
            return make_prefix_keyword(s.get<int>(), j.at("keyword").get<std::string>());
        }
        if (type == "forbidden_words") {
            std::set<std::string> words;
            for (const auto& w : j.at("words")) words.insert(w.get<std::string>());
            return make_forbidden_words(std::move(words));
        }
        if (type == "letter_exclusion") {
            std::set<char> letters;
            for (const auto& l : j.at("letters")) {
                std::string s = l.get<std::string>();
                if (s.size() != 1) throw ParseError(ctx + ": letters must be single characters");
                letters.insert(s[0]);
            }
            return make_letter_exclusion(std::move(letters));
        }
    } catch (const json::exception& e) {
        throw ParseError(ctx + ": " + e.what());
    } catch (const TaskError& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    throw ParseError(ctx + ": unknown constraint type \"" + type + "\"");
}

json constraint_to_json(const ConstraintSpec& c) {
    struct Visitor {
        json operator()(const CharSumSpec& s) const {
            return {{"type", "char_sum"},
                    {"sentence", scope_to_json(s.scope)},
                    {"min", s.target_min},
                    {"max", s.target_max}};
        }
        json operator()(const WordCountSpec& s) const {
            json j{{"type", "word_count"},
                   {"sentence", scope_to_json(s.scope)},
                   {"min", s.min}};
            if (s.max) j["max"] = *s.max;
            return j;
        }
        json operator()(const SentenceCountSpec& s) const {
            return {{"type", "sentence_count"}, {"n", s.n}};
        }
        json operator()(const PrefixKeywordSpec& s) const {
            return {{"type", "prefix_keyword"},
                    {"sentence", s.sentence},
                    {"keyword", s.keyword}};
        }
        json operator()(const ForbiddenWordsSpec& s) const {
            return {{"type", "forbidden_words"},
                    {"words", std::vector<std::string>(s.words.begin(), s.words.end())}};
        }
        json operator()(const LetterExclusionSpec& s) const {
            std::vector<std::string> letters;
            for (char c : s.letters) letters.emplace_back(1, c);
            return {{"type", "letter_exclusion"}, {"letters", letters}};
        }
    };
    return std::visit(Visitor{}, c.variant);
}

} // namespace

TaskSpec parse_task_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("task file: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("task file: top level must be an object");

    TaskSpec task;
    try {
        task.name = j.at("name").get<std::string>();
        task.preprompt = j.value("preprompt", std::string{});
        if (!j.contains("sentences") || !j.at("sentences").is_number_integer())
            throw ParseError("task file: \"sentences\" must be an integer");
        task.sentence_count = j.at("sentences").get<int>();
        if (j.contains("budget")) {
            const json& b = j.at("budget");
            if (b.contains("max_llm_calls")) task.budget.max_llm_calls = b.at("max_llm_calls").get<long>();
            if (b.contains("max_solutions")) task.budget.max_solutions = b.at("max_solutions").get<long>();
            if (b.contains("max_wall_ms")) task.budget.max_wall_ms = b.at("max_wall_ms").get<long>();
        }
        const json& cs = j.value("constraints", json::array());
        for (std::size_t i = 0; i < cs.size(); ++i)
            task.constraints.push_back(constraint_from_json(cs[i], i));
    } catch (const json::exception& e) {
        throw ParseError(std::string("task file: ") + e.what());
    }
    try {
        check_task(task);
    } catch (const TaskError& e) {
        throw ParseError(std::string("task file: ") + e.what());
    }
    return task;
}

TaskSpec parse_task_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("task file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_task_json(buf.str());
}

std::string task_to_json(const TaskSpec& task) {
    json j;
    j["name"] = task.name;
    j["preprompt"] = task.preprompt;
    j["sentences"] = task.sentence_count;
    json cs = json::array();
    for (const auto& c : task.constraints) cs.push_back(constraint_to_json(c));
    j["constraints"] = cs;
    if (task.budget.any()) {
        json b;
        if (task.budget.max_llm_calls) b["max_llm_calls"] = *task.budget.max_llm_calls;
        if (task.budget.max_solutions) b["max_solutions"] = *task.budget.max_solutions;
        if (task.budget.max_wall_ms) b["max_wall_ms"] = *task.budget.max_wall_ms;
        j["budget"] = b;
    }
    return j.dump(2);
}

} // namespace gencp
