// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orig/common/clock.hpp"
#include "orig/gateways/backends.hpp"
#include "orig/gateways/cassette.hpp"
#include "orig/gateways/rate_limiter.hpp"

namespace orig::gateways {

struct ModelExchange {
    InstructionRole role = InstructionRole::Bootstrap;
    std::string rendered_prompt;
    std::vector<std::string> attached_image_keys;
    std::string raw_response;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t latency_ms = 0;
};

// Per-exchange accounting record emitted to the observer (the pipeline's
// cost tracker).
struct ExchangeStats {
    std::string service;  // canonical service name
    std::optional<InstructionRole> role;
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
    std::int64_t elapsed_ms = 0;
};

struct GatewayHubConfig {
    int retry_attempts = 3;
    int max_hits = 10;
    std::int64_t retry_backoff_ms = 50;
};

class GatewayHub {
public:
    GatewayHub(GatewayHubConfig config, BackendSet backends, std::shared_ptr<Cassette> cassette,
               std::shared_ptr<TimeSource> time, std::shared_ptr<RateLimiterSet> limiters,
               std::shared_ptr<WaitClock> wait_clock);

    ModelExchange model_invoke(InstructionRole role, const std::map<std::string, std::string>& vars,
                               const std::vector<AttachedImage>& images = {});

    std::vector<SearchHit> search_text(const std::string& query);
    std::vector<SearchHit> search_images(const std::string& query);

    std::string fetch_page(const std::string& url);
    std::string fetch_image(const std::string& url);

    std::string generate(const std::string& prompt, const std::vector<AttachedImage>& refs);

    void set_observer(std::function<void(const ExchangeStats&)> observer);

    TimeSource& time() { return *time_; }
    CassetteMode mode() const { return cassette_->mode(); }
    Cassette& cassette() { return *cassette_; }

private:
    struct Outcome {
        std::string body;
        std::int64_t tokens_in = 0;
        std::int64_t tokens_out = 0;
        std::int64_t elapsed_ms = 0;
    };

    Outcome exchange(const std::string& service_label, const std::string& canonical_service,
                     std::optional<InstructionRole> role, const std::string& request_text,
                     const std::vector<std::string>& blob_hashes, bool model_accounting,
                     const std::function<BackendResponse()>& live_call);

    std::vector<SearchHit> run_search(const char* service_name, SearchBackend* backend,
                                      const std::string& query);

    GatewayHubConfig config_;
    BackendSet backends_;
    std::shared_ptr<Cassette> cassette_;
    std::shared_ptr<TimeSource> time_;
    std::shared_ptr<RateLimiterSet> limiters_;
    std::shared_ptr<WaitClock> wait_clock_;
    std::function<void(const ExchangeStats&)> observer_;
};

}  // namespace orig::gateways
