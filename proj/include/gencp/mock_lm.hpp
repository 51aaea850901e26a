#ifndef GENCP_MOCK_LM_HPP
#define GENCP_MOCK_LM_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gencp/lm.hpp"

namespace gencp {

struct MockOptions {
    int n = 2;              // n-gram order, 2 or 3
    unsigned seed = 0;
    double jitter = 0.0;    // deterministic per-seed score perturbation
                            // (breaks smoothing ties differently per seed)
    bool split_long_words = false;
    int split_min_len = 8;  // words at least this long become two sub-tokens
};

// Deterministic word-level n-gram model with add-one smoothing, backing
// both backend contracts for offline runs. Terminal punctuation is fused
// onto the preceding word at load, so sentence-ending words ("ran.") are
// vocabulary entries of their own and a domain never contains a bare
// punctuation token. Immutable after construction.
class MockLm : public LeftToRightModel, public MaskedModel {
public:
    MockLm(const std::string& corpus, MockOptions opts);

    Domain next_token_domain(const LeftPrompt& prompt, int k, double temperature) override;
    std::vector<Domain> fill_mask_domains(const MaskedPrompt& prompt, int k) override;
    bool subword_tokens() const override { return opts_.split_long_words; }

    // Fill-mask over free-form text with arbitrary marker positions; one
    // domain per marker, left to right. Candidates are whole words scored
    // by the product of left-context and right-context probabilities.
    std::vector<Domain> fill_mask_text(const std::string& text, int k,
                                       const std::string& marker = kDefaultMaskMarker) const;

    // P(word | context) under add-one smoothing, as used for generation.
    double word_log_prob(const std::vector<std::string>& context,
                         const std::string& word) const;

    const std::vector<std::string>& vocabulary() const { return vocab_; }
    int max_word_cost() const;  // largest 1 + char_count(word) in the vocabulary
    int min_word_cost() const;

    // The sub-token pair a word is emitted as, or the word itself.
    std::vector<std::string> token_pieces(const std::string& word) const;

private:
    double scored(const std::string& context_key, const std::string& word) const;
    double bigram_log_prob(const std::string& prev, const std::string& next) const;
    std::string context_key(const std::vector<std::string>& words) const;
    Domain word_domain_from_scores(const std::vector<std::pair<double, std::string>>& scored,
                                   int k) const;

    MockOptions opts_;
    std::vector<std::string> vocab_;
    std::map<std::string, std::map<std::string, int>> ctx_counts_;
    std::map<std::string, int> ctx_totals_;
    std::map<std::string, std::map<std::string, int>> bigram_counts_;
    std::map<std::string, int> bigram_totals_;
    std::map<std::string, std::string> opener_to_rest_;
    std::map<std::string, std::string> word_to_opener_;
};

// n must be 2 or 3; the corpus must contain at least one word.
std::shared_ptr<MockLm> build_mock(const std::string& corpus, int n, unsigned seed,
                                   MockOptions opts = {});

// Reads a plain-text corpus file (one document, sentences separated by
// terminal punctuation).
std::string load_corpus_file(const std::string& path);

} // namespace gencp

#endif
