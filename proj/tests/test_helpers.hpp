#ifndef GENCP_TEST_HELPERS_HPP
#define GENCP_TEST_HELPERS_HPP

#include <string>
#include <vector>

#include "gencp/bench.hpp"
#include "gencp/state.hpp"
#include "gencp/task.hpp"
#include "gencp/token.hpp"

namespace gencp::test {

// A task bounded enough for init_state; most state tests don't care about
// the constraints themselves.
inline TaskSpec trivial_task(int sentences = 1) {
    TaskSpec t;
    t.name = "test";
    t.sentence_count = sentences;
    t.constraints = {make_sentence_count(sentences)};
    return t;
}

// Force-assigns a token sequence, wrapping each token in a singleton domain.
inline void force_assign(CspState& state, const std::vector<std::string>& surfaces) {
    for (const std::string& s : surfaces) {
        const int var = extend_variable(state);
        Domain d;
        d.candidates.push_back(make_token(s, -1.0));
        set_domain(state, var, d);
        assign_token(state, var, make_token(s, -1.0));
    }
}

inline Domain domain_of(const std::vector<std::pair<std::string, double>>& items) {
    Domain d;
    for (const auto& [s, score] : items) d.candidates.push_back(make_token(s, score));
    return d;
}

inline std::vector<std::string> surfaces_of(const Domain& d) {
    std::vector<std::string> out;
    for (const auto& t : d.candidates) out.push_back(t.surface);
    return out;
}

} // namespace gencp::test

#endif
