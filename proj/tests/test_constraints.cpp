#include <doctest.h>

#include "gencp/constraints.hpp"
#include "gencp/errors.hpp"
#include "test_helpers.hpp"

using namespace gencp;
using namespace gencp::test;

namespace {

TaskSpec char_task(int target_min, int target_max, int sentences = 1) {
    TaskSpec t;
    t.name = "chars";
    t.sentence_count = sentences;
    t.constraints = {make_char_sum(SentenceScope{}, target_min, target_max)};
    return t;
}

} // namespace

TEST_CASE("constraint spec validation") {
    CHECK_THROWS_AS(make_char_sum(SentenceScope{}, 5, 4), TaskError);
    CHECK_THROWS_AS(make_word_count(SentenceScope{}, 4, 2), TaskError);
    CHECK_THROWS_AS(make_sentence_count(0), TaskError);
    CHECK_THROWS_AS(make_prefix_keyword(0, ""), TaskError);
    CHECK_THROWS_AS(make_forbidden_words({}), TaskError);
    CHECK(make_char_sum(SentenceScope{}, 82, 82).id() == "char_sum[all]");
    CHECK(make_prefix_keyword(2, "Barbarians").id() == "prefix_keyword[s2]");
}

TEST_CASE("char-sum propagator: closers kept only inside the window") {
    CspState s = init_state(char_task(10, 10));
    force_assign(s, {"The", " boy"});  // consumed 7
    CharSumSpec spec{SentenceScope{}, 10, 10};

    Domain d = domain_of({{" it.", -0.1}, {" ha.", -0.2}, {" long.", -0.3}, {" on", -0.4}});
    // costs: 4 (hits 11), 4, 6, 3 (continuation, leaves 0 for the closer)
    PropagationResult r = propagate_char_sum(s, d, spec);
    // " it." and " ha." overshoot (7+4=11), " long." overshoots, " on" leaves
    // no room for a final word (10-7-3=0 < min_word_cost)
    CHECK(r.wiped_out);

    Domain d2 = domain_of({{" ha.", -0.2}, {" x", -0.5}});
    s.sentence_char_used = 6;  // force exactly 4 remaining
    PropagationResult r2 = propagate_char_sum(s, d2, spec);
    // " ha." closes exactly; " x" still leaves room for a minimal word.
    REQUIRE(surfaces_of(r2.filtered) == std::vector<std::string>{" ha.", " x"});
}

TEST_CASE("char-sum propagator: zero-slack boundary keeps the exact closer") {
    CspState s = init_state(char_task(12, 12));
    force_assign(s, {"The", " boy"});  // consumed 7
    CharSumSpec spec{SentenceScope{}, 12, 12};
    // " ran." costs exactly the remaining 5: kept, constraint satisfied.
    Domain d = domain_of({{" ran.", -0.1}});
    PropagationResult r = propagate_char_sum(s, d, spec);
    CHECK_FALSE(r.wiped_out);
    CHECK(surfaces_of(r.filtered) == std::vector<std::string>{" ran."});
}

TEST_CASE("char-sum propagator with previewed future sets (pathological pair)") {
    CspState s = init_state(char_task(10, 10));
    CharSumSpec spec{SentenceScope{}, 10, 10};
    // Budget 10 remains. Future position offers closing costs {3,5,7}.
    FutureLengthSets fut;
    fut.any.push_back({3, 5, 7});
    fut.closing.push_back({3, 5, 7});

    // Mid-sentence openers of costs 3,4,7,9 (surfaces sized accordingly).
    CspState mid = init_state(char_task(10, 10));
    force_assign(mid, {"xx"});
    mid.sentence_char_used = 0;  // keep full budget while mid-sentence
    Domain d = domain_of({{" ab", -0.1}, {" abc", -0.2}, {" abcdef", -0.3}, {" abcdefgh", -0.4}});
    PropagationResult r = propagate_char_sum(mid, d, spec, {}, fut);
    // 3+7=10 and 7+3=10 close within the window. 4 has no previewed partner
    // summing to 10, but 4+3 still leaves room for one more word beyond the
    // window, so it survives the sound filter; 9 leaves room for nothing.
    CHECK(surfaces_of(r.filtered) ==
          std::vector<std::string>{" ab", " abc", " abcdef"});
}

TEST_CASE("word-count propagator") {
    TaskSpec t;
    t.name = "wc";
    t.sentence_count = 1;
    t.constraints = {make_word_count(SentenceScope{}, 14, 14)};
    CspState s = init_state(t);
    force_assign(s, {"The", " men", " rode", " on", " by"});  // 4 complete + 1 open

    WordCountSpec spec{SentenceScope{}, 14, std::make_optional(14)};
    Domain d = domain_of({{" far.", -0.1}, {" far", -0.2}, {"!", -0.3}});
    PropagationResult r = propagate_word_count(s, d, spec);
    // All sentence-ending candidates close at 5 or 6 words < 14; the
    // continuation opener survives.
    CHECK(surfaces_of(r.filtered) == std::vector<std::string>{" far"});

    WordCountSpec vacuous{SentenceScope{}, 0, std::nullopt};
    PropagationResult r2 = propagate_word_count(s, d, vacuous);
    CHECK(surfaces_of(r2.filtered) == surfaces_of(d));

    // At the maximum, word-opening candidates are pruned; only the
    // continuation closer fits (5 words exactly).
    WordCountSpec max2{SentenceScope{}, 0, std::make_optional(5)};
    PropagationResult r3 = propagate_word_count(s, d, max2);
    CHECK(surfaces_of(r3.filtered) == std::vector<std::string>{"!"});
}

TEST_CASE("prefix keyword propagator") {
    TaskSpec t;
    t.name = "kw";
    t.sentence_count = 1;
    t.constraints = {make_prefix_keyword(0, "Dragons")};
    CspState s = init_state(t);

    ConstraintSpec spec = make_prefix_keyword(0, "Dragons");
    Domain d = domain_of({{" Dragons", -0.1}, {" Drag", -0.2}, {" Kingdoms", -0.3},
                          {" Dragonsx", -0.4}});
    PropagationResult r = propagate_lexical(s, d, spec);
    CHECK(surfaces_of(r.filtered) == std::vector<std::string>{" Dragons", " Drag"});

    // Under a whole-word backend only the exact keyword survives.
    PropagationConfig whole;
    whole.whole_word_tokens = true;
    PropagationResult rw = propagate_lexical(s, d, spec, whole);
    CHECK(surfaces_of(rw.filtered) == std::vector<std::string>{" Dragons"});

    // Once the keyword is placed, word-opening candidates are free again.
    force_assign(s, {" Dragons"});
    Domain d2 = domain_of({{" flew", -0.1}, {"lair", -0.2}});
    PropagationResult r2 = propagate_lexical(s, d2, spec);
    // " flew" completes "Dragons" (match); "lair" would grow "Dragonslair".
    CHECK(surfaces_of(r2.filtered) == std::vector<std::string>{" flew"});

    // A wrong first word blocks everything that completes it.
    CspState s2 = init_state(t);
    force_assign(s2, {" King"});
    PropagationResult r3 = propagate_lexical(s2, d2, spec);
    CHECK(r3.wiped_out);
}

TEST_CASE("forbidden words propagator uses whole-word comparison") {
    TaskSpec t;
    t.name = "fw";
    t.sentence_count = 1;
    t.constraints = {make_forbidden_words({"the"})};
    CspState s = init_state(t);
    ConstraintSpec spec = make_forbidden_words({"the"});

    // " their" embeds "the" but is a different word: kept even when judged
    // as a finished word.
    PropagationConfig whole;
    whole.whole_word_tokens = true;
    Domain d = domain_of({{" their", -0.1}, {" the", -0.2}, {" The", -0.3}, {" cat", -0.4}});
    PropagationResult r = propagate_lexical(s, d, spec, whole);
    CHECK(surfaces_of(r.filtered) == std::vector<std::string>{" their", " cat"});

    // Sub-word backend: " the" may still grow into "their"; it dies only
    // when a later token completes it as "the".
    PropagationResult r2 = propagate_lexical(s, d, spec);
    CHECK(surfaces_of(r2.filtered) ==
          std::vector<std::string>{" their", " the", " The", " cat"});
    force_assign(s, {" the"});
    Domain d2 = domain_of({{" cat", -0.1}, {"ir", -0.2}, {".", -0.3}});
    PropagationResult r3 = propagate_lexical(s, d2, spec);
    // " cat" completes "the" (prune), "." completes "the." (prune); "ir"
    // grows it into "their" (keep).
    CHECK(surfaces_of(r3.filtered) == std::vector<std::string>{"ir"});
}

TEST_CASE("letter exclusion propagator matches a per-token scan oracle") {
    TaskSpec t;
    t.name = "le";
    t.sentence_count = 1;
    t.constraints = {make_letter_exclusion({'e'})};
    CspState s = init_state(t);
    ConstraintSpec spec = make_letter_exclusion({'e'});

    std::vector<std::pair<std::string, double>> items;
    const std::vector<std::string> words{"cat",  "dog",   "Egg",  "tree", "sky",
                                         "red",  "blue",  "grass", "stone", "hill"};
    for (std::size_t i = 0; i < words.size(); ++i)
        items.push_back({" " + words[i], -0.01 * static_cast<double>(i + 1)});
    Domain d = domain_of(items);

    PropagationResult r = propagate_lexical(s, d, spec);
    std::vector<std::string> expected;
    for (const auto& [surface, score] : items) {
        bool has = false;
        for (char c : surface)
            if (c == 'e' || c == 'E') has = true;
        if (!has) expected.push_back(surface);
    }
    CHECK(surfaces_of(r.filtered) == expected);
}

TEST_CASE("propagators only ever remove candidates and keep order") {
    CspState s = init_state(char_task(20, 30));
    force_assign(s, {"The"});
    Domain d = domain_of({{" boy", -0.1}, {" ran.", -0.2}, {" a", -0.3}});
    TaskSpec t = char_task(20, 30);
    PropagationResult r = propagate_all(s, t, d, {});
    // Survivors appear in their original relative order.
    auto in = surfaces_of(d);
    auto out = surfaces_of(r.filtered);
    std::size_t pos = 0;
    for (const auto& surf : in)
        if (pos < out.size() && out[pos] == surf) ++pos;
    CHECK(pos == out.size());
}

TEST_CASE("validator: sentence splitting and measures") {
    auto sentences = split_sentences("The boy ran. He left! Did he?");
    REQUIRE(sentences.size() == 3);
    CHECK(sentences[0] == "The boy ran.");
    CHECK(sentences[1] == "He left!");
    CHECK(sentences[2] == "Did he?");

    CHECK(split_sentences("").empty());
    CHECK(split_sentences("no terminal").size() == 1);
    // A period not followed by a space does not split.
    CHECK(split_sentences("v1.2 is out.").size() == 1);

    CHECK(split_sentence_words("The boy ran.").size() == 3);
    CHECK(word_core("ran.") == "ran");
    CHECK(word_core("\"Dragons,\"") == "Dragons");
}

TEST_CASE("validator: end-to-end checks") {
    TaskSpec t;
    t.name = "v";
    t.sentence_count = 1;
    t.constraints = {make_char_sum(SentenceScope{}, 12, 12)};

    ValidationReport ok = validate_solution("The boy ran.", t);
    CHECK(ok.satisfied);
    REQUIRE(ok.sentences.size() == 1);
    CHECK(ok.sentences[0].chars == 12);
    CHECK(ok.sentences[0].words == 3);

    ValidationReport bad = validate_solution("The boy ran far.", t);
    CHECK_FALSE(bad.satisfied);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0].constraint_id == "char_sum[all]");
    CHECK(bad.violations[0].measured == "16");

    // Empty text vs a sentence-count requirement.
    TaskSpec sc;
    sc.name = "sc";
    sc.sentence_count = 1;
    sc.constraints = {make_sentence_count(1)};
    ValidationReport empty = validate_solution("", sc);
    CHECK_FALSE(empty.satisfied);
    REQUIRE(empty.violations.size() >= 1);
    CHECK(empty.violations[0].measured == "0");
}

TEST_CASE("validator: lexical checks") {
    TaskSpec t;
    t.name = "lex";
    t.sentence_count = 2;
    t.constraints = {make_prefix_keyword(0, "Dragons"),
                     make_forbidden_words({"the"}), make_letter_exclusion({'z'})};

    CHECK(validate_solution("Dragons flew high. Their lair was hot.", t).satisfied);

    ValidationReport r1 = validate_solution("Dragons flew. The lair was hot.", t);
    CHECK_FALSE(r1.satisfied);  // "The" is forbidden (case-insensitive)

    ValidationReport r2 = validate_solution("Kingdoms flew high. It was hot.", t);
    CHECK_FALSE(r2.satisfied);  // wrong prefix keyword

    ValidationReport r3 = validate_solution("Dragons zag high. It was hot.", t);
    CHECK_FALSE(r3.satisfied);  // letter exclusion

    // Keyword match tolerates attached punctuation, case-sensitively.
    TaskSpec t2;
    t2.name = "kw2";
    t2.sentence_count = 1;
    t2.constraints = {make_prefix_keyword(0, "Dragons")};
    CHECK(validate_solution("Dragons, it is said, fly.", t2).satisfied);
    CHECK_FALSE(validate_solution("dragons fly.", t2).satisfied);
}

TEST_CASE("count_spaces switch changes measured totals") {
    TaskSpec t;
    t.name = "cs";
    t.sentence_count = 1;
    t.constraints = {make_char_sum(SentenceScope{}, 10, 10)};
    // "The boy ran." has 12 chars with spaces, 10 without.
    CHECK_FALSE(validate_solution("The boy ran.", t, CountingRule{true}).satisfied);
    CHECK(validate_solution("The boy ran.", t, CountingRule{false}).satisfied);
}
