#include "gencp/clients.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gencp/errors.hpp"

namespace gencp {

using nlohmann::json;

namespace detail {

struct HttpEndpoint::Impl {
    std::unique_ptr<httplib::Client> client;
};

namespace {

// base_url -> (host:port part for httplib, path prefix)
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    std::string rest = base_url;
    std::string scheme = "http://";
    if (rest.rfind("http://", 0) == 0)
        rest = rest.substr(7);
    else if (rest.rfind("https://", 0) == 0) {
        scheme = "https://";
        rest = rest.substr(8);
    }
    const auto slash = rest.find('/');
    std::string hostport = rest.substr(0, slash);
    std::string prefix = slash == std::string::npos ? "" : rest.substr(slash);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {scheme + hostport, prefix};
}

} // namespace

HttpEndpoint::HttpEndpoint(EndpointConfig cfg) : cfg_(std::move(cfg)), impl_(new Impl) {
    const char* key = cfg_.api_key_env.empty() ? nullptr : std::getenv(cfg_.api_key_env.c_str());
    if (!key || !*key)
        throw BackendError("credentials absent: environment variable " + cfg_.api_key_env +
                           " is not set");
    api_key_ = key;
    auto [hostport, prefix] = split_base_url(cfg_.base_url);
    cfg_.base_url = prefix;  // keep the path prefix, client owns host/port
    impl_->client = std::make_unique<httplib::Client>(hostport);
    impl_->client->set_connection_timeout(0, cfg_.timeout_ms * 1000);
    impl_->client->set_read_timeout(0, cfg_.timeout_ms * 1000);
}

HttpEndpoint::~HttpEndpoint() = default;

ClientStats HttpEndpoint::stats() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return stats_;
}

void HttpEndpoint::throttle() {
    if (cfg_.max_requests_per_sec <= 0.0) return;
    const double min_gap = 1.0 / cfg_.max_requests_per_sec;
    double wait = 0.0;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const double now = std::chrono::duration<double>(
                               std::chrono::steady_clock::now().time_since_epoch())
                               .count();
        const double earliest = last_request_time_ + min_gap;
        wait = earliest > now ? earliest - now : 0.0;
        last_request_time_ = now + wait;
    }
    if (wait > 0.0)
        std::this_thread::sleep_for(std::chrono::duration<double>(wait));
}

std::string HttpEndpoint::post_json(const std::string& path, const std::string& body) {
    const std::string full_path = cfg_.base_url + path;
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

    for (int attempt = 0;; ++attempt) {
        throttle();
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stats_.requests += 1;
        }
        httplib::Result res = impl_->client->Post(full_path, headers, body, "application/json");
        if (res && res->status == 200) return res->body;

        const int status = res ? res->status : 0;
        const bool retryable = !res || status == 429 || status >= 500;
        if (!retryable)
            throw BackendError("endpoint " + full_path + " returned HTTP " +
                               std::to_string(status) + ": " + res->body);
        if (attempt >= cfg_.max_retries)
            throw BackendError("endpoint " + full_path + " failed after " +
                               std::to_string(attempt + 1) + " attempts (last status " +
                               std::to_string(status) + ")");
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stats_.retries += 1;
        }
        const int backoff = cfg_.backoff_base_ms * (1 << attempt);
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
    }
}

} // namespace detail

namespace {

// Temperature bucketed to 2 decimals for cache keys.
std::string cache_key(const std::string& prompt, int k, double temperature) {
    const long bucket = std::lround(temperature * 100.0);
    return prompt + "\x1f" + std::to_string(k) + "\x1f" + std::to_string(bucket);
}

Token token_from_entry(const std::string& surface, double score) {
    // Surfaces pass through untouched (no trimming or casing).
    return make_token(surface, score);
}

} // namespace

CompletionClient::CompletionClient(EndpointConfig cfg) : endpoint_(std::move(cfg)) {}

Domain CompletionClient::complete_topk(const std::string& prompt, int k, double temperature) {
    if (k < 1) throw ContractViolation("complete_topk: k must be >= 1");
    const std::string key = cache_key(prompt, k, temperature);
    if (endpoint_.config().cache) {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    json body{{"model", endpoint_.config().model_name},
              {"prompt", prompt},
              {"max_tokens", 1},
              {"logprobs", k},
              {"temperature", temperature}};
    const std::string raw = endpoint_.post_json("/v1/completions", body.dump());

    Domain domain;
    domain.source = DomainSource::Autoregressive;
    try {
        const json j = json::parse(raw);
        const json& top = j.at("choices").at(0).at("logprobs").at("top_logprobs").at(0);
        for (auto it = top.begin(); it != top.end(); ++it)
            domain.candidates.push_back(token_from_entry(it.key(), it.value().get<double>()));
    } catch (const json::exception& e) {
        throw BackendError(std::string("completions: malformed response (") + e.what() +
                           "): " + raw);
    }
    normalize_domain(domain);
    truncate_domain(domain, k);
    domain.under_k = static_cast<int>(domain.candidates.size()) < k;

    if (endpoint_.config().cache) {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_[key] = domain;
    }
    return domain;
}

Domain CompletionClient::next_token_domain(const LeftPrompt& prompt, int k, double temperature) {
    return complete_topk(prompt.text(), k, temperature);
}

FillMaskClient::FillMaskClient(EndpointConfig cfg) : endpoint_(std::move(cfg)) {}

std::vector<Domain> FillMaskClient::fill_mask_topk(const std::string& masked_text, int k) {
    if (k < 1) throw ContractViolation("fill_mask_topk: k must be >= 1");
    const std::string key = cache_key(masked_text, k, 0.0);
    if (endpoint_.config().cache) {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    const std::string& marker = endpoint_.config().mask_marker;
    std::size_t expected_masks = 0;
    for (std::size_t pos = masked_text.find(marker); pos != std::string::npos;
         pos = masked_text.find(marker, pos + marker.size()))
        ++expected_masks;

    json body{{"model", endpoint_.config().model_name},
              {"text", masked_text},
              {"mask_token", marker},
              {"top_k", k}};
    const std::string raw = endpoint_.post_json("/v1/fill-mask", body.dump());

    std::vector<Domain> domains;
    try {
        const json j = json::parse(raw);
        for (const json& mask : j.at("masks")) {
            Domain d;
            d.source = DomainSource::Masked;
            for (const json& cand : mask)
                d.candidates.push_back(token_from_entry(cand.at("token").get<std::string>(),
                                                        cand.at("score").get<double>()));
            normalize_domain(d);
            truncate_domain(d, k);
            d.under_k = static_cast<int>(d.candidates.size()) < k;
            domains.push_back(std::move(d));
        }
    } catch (const json::exception& e) {
        throw BackendError(std::string("fill-mask: malformed response (") + e.what() +
                           "): " + raw);
    }
    if (domains.size() != expected_masks)
        throw BackendError("fill-mask: expected " + std::to_string(expected_masks) +
                           " mask domains, got " + std::to_string(domains.size()));

    if (endpoint_.config().cache) {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_[key] = domains;
    }
    return domains;
}

std::vector<Domain> FillMaskClient::fill_mask_domains(const MaskedPrompt& prompt, int k) {
    return fill_mask_topk(prompt.text(endpoint_.config().mask_marker), k);
}

} // namespace gencp
