#include "gencp/lm.hpp"

#include "gencp/errors.hpp"

namespace gencp {

std::string LeftPrompt::text() const {
    if (generated.empty()) return preprompt;
    if (preprompt.empty()) return generated;
    return preprompt + kSeparator + generated;
}

std::string MaskedPrompt::text(const std::string& marker) const {
    std::string out = LeftPrompt{preprompt, generated}.text();
    for (int i = 0; i < mask_count; ++i) {
        if (!out.empty()) out += kSeparator;
        out += marker;
    }
    return out;
}

LeftPrompt build_left_prompt(const CspState& state, const std::string& preprompt) {
    return LeftPrompt{preprompt, render_text(state)};
}

MaskedPrompt build_masked_prompt(const CspState& state, const std::string& preprompt, int d) {
    if (d < 1) throw ContractViolation("build_masked_prompt: d must be >= 1");
    return MaskedPrompt{preprompt, render_text(state), d};
}

} // namespace gencp
