#include "gencp/mock_lm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "gencp/errors.hpp"

namespace gencp {

namespace {

constexpr char kCtxSep = '\x1f';

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::istringstream in(text);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

bool all_punctuation(const std::string& w) {
    return std::none_of(w.begin(), w.end(),
                        [](unsigned char c) { return std::isalnum(c); });
}

// FNV-1a over (seed, context, word); stable across runs and platforms.
double unit_hash(unsigned seed, const std::string& context, const std::string& word) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (int i = 0; i < 4; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
    for (unsigned char c : context) mix(c);
    mix(0xff);
    for (unsigned char c : word) mix(c);
    return static_cast<double>(h >> 11) / static_cast<double>(1ull << 53);
}

} // namespace

MockLm::MockLm(const std::string& corpus, MockOptions opts) : opts_(opts) {
    if (opts_.n != 2 && opts_.n != 3)
        throw ContractViolation("mock n-gram order must be 2 or 3");

    // Fuse standalone punctuation chunks onto the preceding word.
    std::vector<std::string> stream;
    for (const std::string& raw : split_words(corpus)) {
        if (all_punctuation(raw) && !stream.empty())
            stream.back() += raw;
        else if (!all_punctuation(raw))
            stream.push_back(raw);
    }
    if (stream.empty()) throw TaskError("mock corpus is empty");

    std::set<std::string> vocab_set(stream.begin(), stream.end());
    vocab_.assign(vocab_set.begin(), vocab_set.end());

    const std::size_t ctx_len = static_cast<std::size_t>(opts_.n - 1);
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (i >= 1) {
            bigram_counts_[stream[i - 1]][stream[i]] += 1;
            bigram_totals_[stream[i - 1]] += 1;
        }
        if (i >= ctx_len) {
            std::vector<std::string> ctx(stream.begin() + (i - ctx_len),
                                         stream.begin() + i);
            const std::string key = context_key(ctx);
            ctx_counts_[key][stream[i]] += 1;
            ctx_totals_[key] += 1;
        }
    }

    if (opts_.split_long_words) {
        for (const std::string& w : vocab_) {
            if (char_count(w) < opts_.split_min_len) continue;
            const std::size_t h = (w.size() + 1) / 2;
            std::string opener = w.substr(0, h);
            std::string rest = w.substr(h);
            if (rest.empty()) continue;
            // Skip ambiguous splits: the opener must not read as a complete
            // word or collide with another word's opener.
            if (vocab_set.count(opener) || opener_to_rest_.count(opener)) continue;
            opener_to_rest_[opener] = rest;
            word_to_opener_[w] = std::move(opener);
        }
    }
}

std::string MockLm::context_key(const std::vector<std::string>& words) const {
    const std::size_t ctx_len = static_cast<std::size_t>(opts_.n - 1);
    std::string key;
    const std::size_t start = words.size() > ctx_len ? words.size() - ctx_len : 0;
    for (std::size_t i = start; i < words.size(); ++i) {
        if (!key.empty()) key += kCtxSep;
        key += words[i];
    }
    if (words.size() < ctx_len) key.insert(0, 1, kCtxSep);  // marks a short context
    return key;
}

double MockLm::word_log_prob(const std::vector<std::string>& context,
                             const std::string& word) const {
    const std::string key = context_key(context);
    const double v = static_cast<double>(vocab_.size());
    auto it = ctx_counts_.find(key);
    double count = 0.0, total = 0.0;
    if (it != ctx_counts_.end()) {
        total = static_cast<double>(ctx_totals_.at(key));
        auto wit = it->second.find(word);
        if (wit != it->second.end()) count = static_cast<double>(wit->second);
    }
    return std::log((count + 1.0) / (total + v));
}

double MockLm::bigram_log_prob(const std::string& prev, const std::string& next) const {
    const double v = static_cast<double>(vocab_.size());
    double count = 0.0, total = 0.0;
    auto it = bigram_counts_.find(prev);
    if (it != bigram_counts_.end()) {
        total = static_cast<double>(bigram_totals_.at(prev));
        auto nit = it->second.find(next);
        if (nit != it->second.end()) count = static_cast<double>(nit->second);
    }
    return std::log((count + 1.0) / (total + v));
}

double MockLm::scored(const std::string& context_key_str, const std::string& word) const {
    double s = 0.0;
    if (opts_.jitter != 0.0)
        s = opts_.jitter * unit_hash(opts_.seed, context_key_str, word);
    return s;
}

Domain MockLm::word_domain_from_scores(
    const std::vector<std::pair<double, std::string>>& scored_words, int k) const {
    Domain d;
    d.source = DomainSource::Mock;
    std::vector<std::pair<double, std::string>> ranked = scored_words;
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (const auto& [score, word] : ranked) {
        if (static_cast<int>(d.candidates.size()) >= k) break;
        d.candidates.push_back(make_token(std::string(1, kSeparator) + word, score));
    }
    return d;
}

Domain MockLm::next_token_domain(const LeftPrompt& prompt, int k, double /*temperature*/) {
    if (k < 1) throw ContractViolation("next_token_domain: k must be >= 1");
    std::vector<std::string> words = split_words(prompt.text());

    // A trailing registered opener forces its continuation piece.
    if (!words.empty()) {
        auto it = opener_to_rest_.find(words.back());
        if (it != opener_to_rest_.end()) {
            Domain d;
            d.source = DomainSource::Mock;
            d.candidates.push_back(make_token(it->second, 0.0));
            return d;
        }
    }

    const std::string key = context_key(words);
    std::vector<std::pair<double, std::string>> scored_words;
    scored_words.reserve(vocab_.size());
    for (const std::string& w : vocab_)
        scored_words.emplace_back(word_log_prob(words, w) + scored(key, w), w);

    std::sort(scored_words.begin(), scored_words.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    Domain d;
    d.source = DomainSource::Autoregressive;
    for (const auto& [score, word] : scored_words) {
        if (static_cast<int>(d.candidates.size()) >= k) break;
        auto split = word_to_opener_.find(word);
        const std::string& piece = split == word_to_opener_.end() ? word : split->second;
        d.candidates.push_back(make_token(std::string(1, kSeparator) + piece, score));
    }
    return d;
}

std::vector<Domain> MockLm::fill_mask_text(const std::string& text, int k,
                                           const std::string& marker) const {
    if (k < 1) throw ContractViolation("fill_mask_text: k must be >= 1");
    std::vector<std::string> slots = split_words(text);
    std::vector<Domain> out;

    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] != marker) continue;

        // Left factor: the n-gram conditional given the nearest left words,
        // unknown (uniform) when a mask interrupts the context window.
        bool left_known = true;
        std::vector<std::string> left;
        const std::size_t ctx_len = static_cast<std::size_t>(opts_.n - 1);
        for (std::size_t back = 0; back < ctx_len && back < i; ++back) {
            const std::string& prev = slots[i - 1 - back];
            if (prev == marker) {
                left_known = false;
                break;
            }
            left.insert(left.begin(), prev);
        }

        // Right factor: bigram continuation onto the next known word.
        const std::string* right = nullptr;
        if (i + 1 < slots.size() && slots[i + 1] != marker) right = &slots[i + 1];

        const std::string key = left_known ? context_key(left) : std::string(1, kCtxSep);
        std::vector<std::pair<double, std::string>> scored_words;
        scored_words.reserve(vocab_.size());
        for (const std::string& w : vocab_) {
            double s = left_known
                           ? word_log_prob(left, w)
                           : std::log(1.0 / static_cast<double>(vocab_.size()));
            if (right) s += bigram_log_prob(w, *right);
            s += scored(key, w);
            scored_words.emplace_back(s, w);
        }
        Domain d = word_domain_from_scores(scored_words, k);
        d.source = DomainSource::Masked;
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Domain> MockLm::fill_mask_domains(const MaskedPrompt& prompt, int k) {
    return fill_mask_text(prompt.text(), k);
}

int MockLm::max_word_cost() const {
    int m = 0;
    for (const auto& w : vocab_) m = std::max(m, 1 + char_count(w));
    return m;
}

int MockLm::min_word_cost() const {
    int m = 0;
    bool first = true;
    for (const auto& w : vocab_) {
        int c = 1 + char_count(w);
        if (first || c < m) m = c;
        first = false;
    }
    return m;
}

std::vector<std::string> MockLm::token_pieces(const std::string& word) const {
    auto it = word_to_opener_.find(word);
    if (it == word_to_opener_.end()) return {word};
    return {it->second, opener_to_rest_.at(it->second)};
}

std::shared_ptr<MockLm> build_mock(const std::string& corpus, int n, unsigned seed,
                                   MockOptions opts) {
    opts.n = n;
    opts.seed = seed;
    return std::make_shared<MockLm>(corpus, opts);
}

std::string load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("corpus file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace gencp
