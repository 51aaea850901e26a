#include <doctest.h>

#include <random>

#include "gencp/mock_lm.hpp"
#include "gencp/preview.hpp"
#include "test_helpers.hpp"

using namespace gencp;
using namespace gencp::test;

namespace {

PreviewSnapshot snapshot_of(const std::vector<std::set<int>>& sets,
                            const std::vector<std::set<int>>& closing) {
    PreviewSnapshot s;
    s.depth = static_cast<int>(sets.size());
    s.length_sets = sets;
    s.closing_sets = closing;
    return s;
}

TaskSpec char_task(int lo, int hi) {
    TaskSpec t;
    t.name = "chars";
    t.sentence_count = 1;
    t.constraints = {make_char_sum(SentenceScope{}, lo, hi)};
    return t;
}

} // namespace

TEST_CASE("admissible_sums enumerates the Cartesian pairs hitting the budget") {
    PreviewSnapshot snap = snapshot_of({{3, 4, 7}, {3, 5, 7}}, {{}, {3, 5, 7}});
    AdmissibleSums sums = admissible_sums(snap, 10);
    CHECK(sums.tuples ==
          std::set<std::vector<int>>{{3, 7}, {7, 3}});

    // Singleton case.
    PreviewSnapshot one = snapshot_of({{5}}, {{5}});
    CHECK(admissible_sums(one, 5).tuples == std::set<std::vector<int>>{{5}});

    // Range window.
    AdmissibleSums range = admissible_sums(snap, BudgetWindow{9, 10});
    CHECK(range.tuples ==
          std::set<std::vector<int>>{{3, 7}, {7, 3}, {4, 5}});
}

TEST_CASE("admissible_sums equals a brute-force Cartesian oracle") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int depth = 1 + static_cast<int>(rng() % 3);
        std::vector<std::set<int>> sets(depth);
        for (auto& s : sets) {
            const int n = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < n; ++i) s.insert(1 + static_cast<int>(rng() % 9));
        }
        const int budget = 2 + static_cast<int>(rng() % 18);
        PreviewSnapshot snap = snapshot_of(sets, sets);

        std::set<std::vector<int>> expected;
        std::vector<int> tuple(static_cast<std::size_t>(depth));
        auto enumerate = [&](auto&& self, int pos) -> void {
            if (pos == depth) {
                int sum = 0;
                for (int c : tuple) sum += c;
                if (sum == budget) expected.insert(tuple);
                return;
            }
            for (int c : sets[static_cast<std::size_t>(pos)]) {
                tuple[static_cast<std::size_t>(pos)] = c;
                self(self, pos + 1);
            }
        };
        enumerate(enumerate, 0);
        CHECK(admissible_sums(snap, budget).tuples == expected);
    }
}

TEST_CASE("join_filter keeps first-coordinate matches in order") {
    PreviewSnapshot snap = snapshot_of({{3, 4, 7}, {3, 5, 7}}, {{}, {3, 5, 7}});
    AdmissibleSums sums = admissible_sums(snap, 10);

    Domain current = domain_of({{" ab", -0.1}, {" abc", -0.2}, {" abcdef", -0.3},
                                {" abcdefgh", -0.4}});
    Domain filtered = join_filter(current, snap, sums);
    // costs {3,4,7,9}: only 3 and 7 appear as first coordinates.
    CHECK(surfaces_of(filtered) == std::vector<std::string>{" ab", " abcdef"});

    // Universal sums: identity.
    AdmissibleSums universal;
    universal.universal = true;
    CHECK(surfaces_of(join_filter(current, snap, universal)) == surfaces_of(current));

    // Sums covering every cost: identity.
    PreviewSnapshot cover = snapshot_of({{3, 4, 7, 9}, {1, 3, 6, 7}}, {{}, {1, 3, 6, 7}});
    Domain all = join_filter(current, cover, admissible_sums(cover, 10));
    CHECK(surfaces_of(all) == surfaces_of(current));
}

TEST_CASE("should_preview arms on remaining budget") {
    TaskSpec t = char_task(30, 30);
    SearchConfig cfg;
    cfg.preview_trigger_budget = 10;

    CspState s = init_state(t);
    CHECK_FALSE(should_preview(s, t, cfg));  // remaining 30 > 10

    force_assign(s, {"The", " knight", " rode", " off", " far"});  // consumed 23
    CHECK(should_preview(s, t, cfg));  // remaining 7 <= 10

    TaskSpec none;
    none.name = "none";
    none.sentence_count = 1;
    none.constraints = {make_sentence_count(1)};
    CspState s2 = init_state(none);
    CHECK_FALSE(should_preview(s2, none, cfg));  // no char-sum constraint
}

TEST_CASE("preview_domains: one MLM call shape, filtering, wipeout") {
    auto mock = build_mock("a bed of gold . a bed of iron .", 2, 0);
    TaskSpec t = char_task(12, 12);
    CspState s = init_state(t);
    force_assign(s, {"a", " bed"});

    PreviewResult r = preview_domains(s, *mock, "", 2, 50);
    REQUIRE_FALSE(r.wiped_out());
    CHECK(r.snapshot->domains.size() == 2);
    CHECK(r.snapshot->length_sets.size() == 2);
    // Full-coverage masks include every vocabulary word.
    CHECK(r.snapshot->domains[0].size() == mock->vocabulary().size());
    // Closing sets hold only sentence-ending costs.
    for (int c : r.snapshot->closing_sets[0])
        CHECK(r.snapshot->length_sets[0].count(c));

    // A letter exclusion covering the whole vocabulary empties every
    // previewed domain: wipeout.
    TaskSpec hard = char_task(12, 12);
    hard.constraints.push_back(make_letter_exclusion({'a', 'e', 'i', 'o'}));
    CspState s2 = init_state(hard);
    force_assign(s2, {"a", " bed"});
    PreviewResult r2 = preview_domains(s2, *mock, "", 2, 50);
    CHECK(r2.wiped_out());
    CHECK(r2.wiped_position == 0);
}

TEST_CASE("preview snapshot costs are rendered contributions") {
    auto mock = build_mock("a bed of gold . a bed of iron .", 2, 0);
    TaskSpec t = char_task(12, 12);

    // Mid-sentence: previewed words cost 1 + their length.
    CspState mid = init_state(t);
    force_assign(mid, {"a"});
    PreviewResult r = preview_domains(mid, *mock, "", 1, 50);
    REQUIRE_FALSE(r.wiped_out());
    CHECK(r.snapshot->length_sets[0] == std::set<int>{2, 3, 4, 6});

    // Sentence start: the leading separator collapses.
    CspState fresh = init_state(t);
    PreviewResult r2 = preview_domains(fresh, *mock, "", 1, 50);
    REQUIRE_FALSE(r2.wiped_out());
    CHECK(r2.snapshot->length_sets[0] == std::set<int>{1, 2, 3, 5});
}

TEST_CASE("preview determinism") {
    auto mock = build_mock("a bed of gold . a bed of iron .", 2, 3);
    TaskSpec t = char_task(12, 12);
    CspState s = init_state(t);
    force_assign(s, {"a", " bed"});
    PreviewResult a = preview_domains(s, *mock, "", 2, 50);
    PreviewResult b = preview_domains(s, *mock, "", 2, 50);
    REQUIRE_FALSE(a.wiped_out());
    REQUIRE_FALSE(b.wiped_out());
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(surfaces_of(a.snapshot->domains[i]) == surfaces_of(b.snapshot->domains[i]));
}

TEST_CASE("admissible_first_costs: sound union over completion depths") {
    // Window exactly 10; previewed positions with distinct closer sets.
    PreviewSnapshot snap = snapshot_of({{3, 4, 7, 10}, {3, 5, 7}}, {{10}, {3, 7}});
    BudgetWindow w{10, 10};

    std::set<int> costs = admissible_first_costs(snap, w, 2);
    // 10 closes immediately. 3 closes via previewed 7; 7 via previewed 3.
    // 4 cannot close in-window (needs 6) but 4+3+2 <= 10 leaves room for a
    // word beyond the window, so it stays admissible.
    CHECK(costs == std::set<int>{3, 4, 7, 10});

    // With only two word slots left, the beyond-window route dies and the
    // pathological pair filter emerges.
    std::set<int> two_slots = admissible_first_costs(snap, w, 2, 2);
    CHECK(two_slots == std::set<int>{3, 7, 10});

    // One slot: only the immediate closer.
    std::set<int> one_slot = admissible_first_costs(snap, w, 2, 1);
    CHECK(one_slot == std::set<int>{10});
}
