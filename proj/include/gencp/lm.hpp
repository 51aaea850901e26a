#ifndef GENCP_LM_HPP
#define GENCP_LM_HPP

#include <string>
#include <vector>

#include "gencp/state.hpp"
#include "gencp/token.hpp"

namespace gencp {

// Default mask placeholder; backend adapters may substitute their own.
inline constexpr const char* kDefaultMaskMarker = "[MASK]";

// Left-to-right continuation prompt: pre-prompt followed by the rendered
// partial assignment.
struct LeftPrompt {
    std::string preprompt;
    std::string generated;

    std::string text() const;
    bool operator==(const LeftPrompt&) const = default;
};

// Prompt with mask_count mask placeholders appended after the generated
// text. The marker literal is chosen by the backend at render time.
struct MaskedPrompt {
    std::string preprompt;
    std::string generated;
    int mask_count = 1;

    std::string text(const std::string& marker = kDefaultMaskMarker) const;
    bool operator==(const MaskedPrompt&) const = default;
};

LeftPrompt build_left_prompt(const CspState& state, const std::string& preprompt);

// Throws ContractViolation when d < 1.
MaskedPrompt build_masked_prompt(const CspState& state, const std::string& preprompt, int d);

// Autoregressive backend: proposes candidate next tokens for a prompt.
class LeftToRightModel {
public:
    virtual ~LeftToRightModel() = default;

    // At most k candidates, sorted by score descending (ties lexicographic),
    // deduplicated, with word/sentence flags derived from surfaces.
    virtual Domain next_token_domain(const LeftPrompt& prompt, int k, double temperature) = 0;

    // True when the backend may emit sub-word pieces (a word can span
    // several tokens). Preview filtering is laxer for such backends.
    virtual bool subword_tokens() const { return true; }
};

// Masked backend: proposes whole-word candidates for each mask position.
class MaskedModel {
public:
    virtual ~MaskedModel() = default;

    // One domain per mask, left to right. One invocation = one model call.
    virtual std::vector<Domain> fill_mask_domains(const MaskedPrompt& prompt, int k) = 0;
};

} // namespace gencp

#endif
