#ifndef GENCP_CLIENTS_HPP
#define GENCP_CLIENTS_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gencp/lm.hpp"
#include "gencp/token.hpp"

namespace gencp {

// A hosted inference endpoint. The wire conventions are documented in
// docs/PROTOCOL.md and exercised by the stub-server tests.
struct EndpointConfig {
    std::string base_url;                         // e.g. http://127.0.0.1:8080
    std::string api_key_env = "GENCP_LLM_API_KEY";
    std::string model_name;
    int timeout_ms = 30000;
    int max_retries = 3;
    int backoff_base_ms = 100;
    double max_requests_per_sec = 0.0;            // 0 disables the limiter
    std::string mask_marker = "[MASK]";
    bool cache = false;  // per-run response cache; changes call counts, so
                         // it is explicit and reported
};

struct ClientStats {
    long requests = 0;   // HTTP requests actually sent
    long retries = 0;
    long cache_hits = 0;
};

namespace detail {

// Shared request plumbing: credentials, retry/backoff, rate limiting.
class HttpEndpoint {
public:
    explicit HttpEndpoint(EndpointConfig cfg);
    ~HttpEndpoint();

    // POSTs a JSON body, retrying 429/5xx with exponential backoff. Throws
    // BackendError on missing credentials, exhausted retries, or other 4xx.
    std::string post_json(const std::string& path, const std::string& body);

    const EndpointConfig& config() const { return cfg_; }
    ClientStats stats() const;

private:
    void throttle();

    EndpointConfig cfg_;
    std::string api_key_;
    mutable std::mutex mutex_;
    ClientStats stats_;
    double last_request_time_ = 0.0;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace detail

// Completion-style adapter: one request per call, asking for the top-k
// next-token log-probabilities.
class CompletionClient : public LeftToRightModel {
public:
    explicit CompletionClient(EndpointConfig cfg);

    Domain next_token_domain(const LeftPrompt& prompt, int k, double temperature) override;

    // Raw-text entry point; one request = one LLM call.
    Domain complete_topk(const std::string& prompt, int k, double temperature);

    ClientStats stats() const { return endpoint_.stats(); }

private:
    detail::HttpEndpoint endpoint_;
    std::mutex cache_mutex_;
    std::map<std::string, Domain> cache_;
};

// Fill-mask adapter: one request per call, one domain per mask position.
class FillMaskClient : public MaskedModel {
public:
    explicit FillMaskClient(EndpointConfig cfg);

    std::vector<Domain> fill_mask_domains(const MaskedPrompt& prompt, int k) override;

    // Raw-text entry point; mask arity is checked against the response.
    std::vector<Domain> fill_mask_topk(const std::string& masked_text, int k);

    ClientStats stats() const { return endpoint_.stats(); }

private:
    detail::HttpEndpoint endpoint_;
    std::mutex cache_mutex_;
    std::map<std::string, std::vector<Domain>> cache_;
};

} // namespace gencp

#endif
