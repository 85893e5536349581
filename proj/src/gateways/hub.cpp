// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/hub.hpp"

#include <spdlog/spdlog.h>

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/common/strings.hpp"
#include "orig/gateways/instruction.hpp"

namespace orig::gateways {

namespace {
constexpr std::size_t kDigestPreviewChars = 160;
}

GatewayHub::GatewayHub(GatewayHubConfig config, BackendSet backends,
                       std::shared_ptr<Cassette> cassette, std::shared_ptr<TimeSource> time,
                       std::shared_ptr<RateLimiterSet> limiters,
                       std::shared_ptr<WaitClock> wait_clock)
    : config_(config),
      backends_(std::move(backends)),
      cassette_(std::move(cassette)),
      time_(std::move(time)),
      limiters_(std::move(limiters)),
      wait_clock_(std::move(wait_clock)) {
    if (!cassette_) cassette_ = std::make_shared<Cassette>();
    if (!time_) time_ = std::make_shared<SystemTimeSource>();
    if (!wait_clock_) wait_clock_ = std::make_shared<SteadyWaitClock>();
    if (!limiters_) limiters_ = std::make_shared<RateLimiterSet>(5, wait_clock_);
}

void GatewayHub::set_observer(std::function<void(const ExchangeStats&)> observer) {
    observer_ = std::move(observer);
}

GatewayHub::Outcome GatewayHub::exchange(const std::string& service_label,
                                         const std::string& canonical_service,
                                         std::optional<InstructionRole> role,
                                         const std::string& request_text,
                                         const std::vector<std::string>& blob_hashes,
                                         bool model_accounting,
                                         const std::function<BackendResponse()>& live_call) {
    const std::string fp =
        hashing::fingerprint(service_label, role ? to_string(*role) : "", request_text, blob_hashes);

    Outcome out;
    const auto start = time_->now_ms();
    if (cassette_->mode() == CassetteMode::Replay) {
        const auto result = cassette_->replay(service_label, fp);
        if (result.failure) {
            throw GatewayError(service_label + ": replayed failure: " + result.entry.response);
        }
        out.body = result.entry.response;
        out.tokens_in = result.entry.tokens_in;
        out.tokens_out = result.entry.tokens_out;
    } else {
        limiters_->limiter_for(canonical_service).acquire();
        BackendResponse resp;
        for (int attempt = 1;; ++attempt) {
            try {
                resp = live_call();
                break;
            } catch (const GatewayError& e) {
                if (attempt >= config_.retry_attempts) {
                    const std::string message = std::string(e.what()) + " (after " +
                                                std::to_string(attempt) + " attempts)";
                    if (cassette_->mode() == CassetteMode::Record) {
                        cassette_->record({Cassette::failure_service(service_label), fp,
                                           strings::ascii_preview(request_text,
                                                                  kDigestPreviewChars),
                                           message, 0, 0});
                    }
                    throw GatewayError(service_label + ": " + message);
                }
                spdlog::debug("{}: attempt {} failed: {}", service_label, attempt, e.what());
                wait_clock_->sleep_ms(config_.retry_backoff_ms * attempt);
            }
        }
        if (model_accounting) {
            out.tokens_in = resp.tokens_in.value_or(strings::approx_token_count(request_text));
            out.tokens_out = resp.tokens_out.value_or(strings::approx_token_count(resp.body));
        }
        out.body = std::move(resp.body);
        if (cassette_->mode() == CassetteMode::Record) {
            cassette_->record({service_label, fp,
                               strings::ascii_preview(request_text, kDigestPreviewChars), out.body,
                               out.tokens_in, out.tokens_out});
        }
    }
    out.elapsed_ms = time_->now_ms() - start;

    if (observer_) {
        observer_({canonical_service, role, out.tokens_in, out.tokens_out, out.elapsed_ms});
    }
    return out;
}

ModelExchange GatewayHub::model_invoke(InstructionRole role,
                                       const std::map<std::string, std::string>& vars,
                                       const std::vector<AttachedImage>& images) {
    ModelExchange ex;
    ex.role = role;
    ex.rendered_prompt = render_instruction(role, vars);
    std::vector<std::string> hashes;
    for (const auto& [hash, bytes] : images) {
        ex.attached_image_keys.push_back(hash);
        hashes.push_back(hash);
    }
    const std::string label = std::string(service::kModel) + ":" + to_string(role);
    const auto out = exchange(label, service::kModel, role, ex.rendered_prompt, hashes, true,
                              [&]() -> BackendResponse {
                                  if (!backends_.model) {
                                      throw GatewayError("no model backend configured");
                                  }
                                  return backends_.model->complete(role, ex.rendered_prompt, images);
                              });
    ex.raw_response = out.body;
    ex.input_tokens = out.tokens_in;
    ex.output_tokens = out.tokens_out;
    ex.latency_ms = out.elapsed_ms;
    return ex;
}

std::vector<SearchHit> GatewayHub::run_search(const char* service_name, SearchBackend* backend,
                                              const std::string& query) {
    if (strings::trim(query).empty()) {
        throw PreconditionError(std::string(service_name) + ": query is empty");
    }
    const auto out = exchange(service_name, service_name, std::nullopt, query, {}, false,
                              [&]() -> BackendResponse {
                                  if (backend == nullptr) {
                                      throw GatewayError(std::string(service_name) +
                                                         ": no backend configured");
                                  }
                                  return backend->search(query);
                              });
    auto hits = hits_from_json(out.body);
    if (static_cast<int>(hits.size()) > config_.max_hits) {
        hits.resize(static_cast<std::size_t>(config_.max_hits));
    }
    return hits;
}

std::vector<SearchHit> GatewayHub::search_text(const std::string& query) {
    return run_search(service::kTextSearch, backends_.text_search.get(), query);
}

std::vector<SearchHit> GatewayHub::search_images(const std::string& query) {
    return run_search(service::kImageSearch, backends_.image_search.get(), query);
}

std::string GatewayHub::fetch_page(const std::string& url) {
    if (strings::trim(url).empty()) throw PreconditionError("fetch_page: url is empty");
    return exchange(service::kPageReader, service::kPageReader, std::nullopt, url, {}, false,
                    [&]() -> BackendResponse {
                        if (!backends_.page_reader) {
                            throw GatewayError("no page reader backend configured");
                        }
                        return backends_.page_reader->fetch(url);
                    })
        .body;
}

std::string GatewayHub::fetch_image(const std::string& url) {
    if (strings::trim(url).empty()) throw PreconditionError("fetch_image: url is empty");
    return exchange(service::kImageFetch, service::kImageFetch, std::nullopt, url, {}, false,
                    [&]() -> BackendResponse {
                        if (!backends_.image_fetch) {
                            throw GatewayError("no image fetch backend configured");
                        }
                        return backends_.image_fetch->fetch(url);
                    })
        .body;
}

std::string GatewayHub::generate(const std::string& prompt, const std::vector<AttachedImage>& refs) {
    std::vector<std::string> hashes;
    hashes.reserve(refs.size());
    for (const auto& [hash, bytes] : refs) hashes.push_back(hash);
    return exchange(service::kImageGen, service::kImageGen, std::nullopt, prompt, hashes, false,
                    [&]() -> BackendResponse {
                        if (!backends_.image_gen) {
                            throw GatewayError("no image generation backend configured");
                        }
                        return backends_.image_gen->generate(prompt, refs);
                    })
        .body;
}

}  // namespace orig::gateways
