// SPDX-License-Identifier: Apache-2.0
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/gateways/live.hpp"

namespace orig::gateways {

using nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v != nullptr ? std::string(v) : fallback;
}

// Splits an absolute URL into (scheme://host[:port], /path?query).
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw GatewayError("not an absolute url: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Client make_client(const std::string& origin, int timeout_seconds) {
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    client.set_follow_location(true);
    return client;
}

std::string require_body(const httplib::Result& res, const std::string& what) {
    if (!res) {
        throw GatewayError(what + ": transport error: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw GatewayError(what + ": status " + std::to_string(res->status));
    }
    return res->body;
}

class LiveModelBackend final : public ModelBackend {
public:
    explicit LiveModelBackend(LiveConfig cfg) : cfg_(std::move(cfg)) {}

    BackendResponse complete(InstructionRole, const std::string& rendered_prompt,
                             const std::vector<AttachedImage>& images) override {
        json content = json::array();
        content.push_back({{"type", "text"}, {"text", rendered_prompt}});
        for (const auto& [hash, bytes] : images) {
            content.push_back(
                {{"type", "image_url"},
                 {"image_url",
                  {{"url", "data:image/png;base64," + hashing::base64_encode(bytes)}}}});
        }
        const json payload = {{"model", cfg_.model_name},
                              {"messages", json::array({{{"role", "user"}, {"content", content}}})}};

        auto client = make_client(cfg_.model_base_url, cfg_.timeout_seconds);
        httplib::Headers headers = {{"Authorization", "Bearer " + cfg_.model_key}};
        const auto res =
            client.Post("/v1/chat/completions", headers, payload.dump(), "application/json");
        const auto body = require_body(res, "model");

        json parsed;
        try {
            parsed = json::parse(body);
        } catch (const json::parse_error& e) {
            throw GatewayError(std::string("model: unparseable response: ") + e.what());
        }
        BackendResponse out;
        try {
            out.body = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
            throw GatewayError("model: response lacks choices[0].message.content");
        }
        if (parsed.contains("usage")) {
            const auto& usage = parsed["usage"];
            if (usage.contains("prompt_tokens")) out.tokens_in = usage["prompt_tokens"].get<std::int64_t>();
            if (usage.contains("completion_tokens")) {
                out.tokens_out = usage["completion_tokens"].get<std::int64_t>();
            }
        }
        return out;
    }

private:
    LiveConfig cfg_;
};

class SerperSearchBackend final : public SearchBackend {
public:
    SerperSearchBackend(LiveConfig cfg, bool images) : cfg_(std::move(cfg)), images_(images) {}

    BackendResponse search(const std::string& query) override {
        auto client = make_client(cfg_.search_base_url, cfg_.timeout_seconds);
        httplib::Headers headers = {{"X-API-KEY", cfg_.search_key}};
        const json payload = {{"q", query}, {"num", 10}};
        const char* endpoint = images_ ? "/images" : "/search";
        const auto res = client.Post(endpoint, headers, payload.dump(), "application/json");
        const auto body = require_body(res, "search");

        json parsed;
        try {
            parsed = json::parse(body);
        } catch (const json::parse_error& e) {
            throw GatewayError(std::string("search: unparseable response: ") + e.what());
        }
        std::vector<SearchHit> hits;
        const char* list_key = images_ ? "images" : "organic";
        if (parsed.contains(list_key)) {
            for (const auto& item : parsed[list_key]) {
                SearchHit h;
                h.rank = static_cast<int>(hits.size()) + 1;
                if (images_) {
                    h.title = item.value("title", "");
                    h.image_url = item.value("imageUrl", "");
                    h.url = item.value("link", h.image_url);
                } else {
                    h.url = item.value("link", "");
                    h.snippet = item.value("snippet", item.value("title", ""));
                }
                hits.push_back(std::move(h));
            }
        }
        return {hits_to_json(hits), std::nullopt, std::nullopt};
    }

private:
    LiveConfig cfg_;
    bool images_;
};

class JinaReaderBackend final : public PageReaderBackend {
public:
    explicit JinaReaderBackend(LiveConfig cfg) : cfg_(std::move(cfg)) {}

    BackendResponse fetch(const std::string& url) override {
        auto client = make_client(cfg_.reader_base_url, cfg_.timeout_seconds);
        httplib::Headers headers;
        if (!cfg_.reader_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.reader_key);
        const auto res = client.Get("/" + url, headers);
        return {require_body(res, "page_reader"), std::nullopt, std::nullopt};
    }

private:
    LiveConfig cfg_;
};

class HttpImageFetchBackend final : public ImageFetchBackend {
public:
    explicit HttpImageFetchBackend(LiveConfig cfg) : cfg_(std::move(cfg)) {}

    BackendResponse fetch(const std::string& url) override {
        const auto [origin, path] = split_url(url);
        auto client = make_client(origin, cfg_.timeout_seconds);
        const auto res = client.Get(path);
        return {require_body(res, "image_fetch"), std::nullopt, std::nullopt};
    }

private:
    LiveConfig cfg_;
};

class OpenAiImageGenBackend final : public ImageGenBackend {
public:
    explicit OpenAiImageGenBackend(LiveConfig cfg) : cfg_(std::move(cfg)) {}

    BackendResponse generate(const std::string& prompt,
                             const std::vector<AttachedImage>&) override {
        // Reference images ride along only for backends that accept them;
        // the default images endpoint is text-conditioned.
        auto client = make_client(cfg_.imagegen_base_url, cfg_.timeout_seconds);
        httplib::Headers headers = {{"Authorization", "Bearer " + cfg_.imagegen_key}};
        const json payload = {{"model", cfg_.imagegen_model}, {"prompt", prompt}, {"n", 1}};
        const auto res =
            client.Post("/v1/images/generations", headers, payload.dump(), "application/json");
        const auto body = require_body(res, "image_gen");
        try {
            const json parsed = json::parse(body);
            const auto& b64 = parsed.at("data").at(0).at("b64_json").get<std::string>();
            return {hashing::base64_decode(b64), std::nullopt, std::nullopt};
        } catch (const std::exception&) {
            // Some backends answer with raw image bytes.
            return {body, std::nullopt, std::nullopt};
        }
    }

private:
    LiveConfig cfg_;
};

}  // namespace

LiveConfig with_env_keys(LiveConfig config) {
    config.model_key = env_or("ORIG_MODEL_KEY", config.model_key);
    config.search_key = env_or("ORIG_SEARCH_KEY", config.search_key);
    config.reader_key = env_or("ORIG_READER_KEY", config.reader_key);
    config.imagegen_key = env_or("ORIG_IMAGEGEN_KEY", config.imagegen_key);
    return config;
}

BackendSet make_live_backends(const LiveConfig& config) {
    BackendSet set;
    set.model = std::make_shared<LiveModelBackend>(config);
    set.text_search = std::make_shared<SerperSearchBackend>(config, false);
    set.image_search = std::make_shared<SerperSearchBackend>(config, true);
    set.page_reader = std::make_shared<JinaReaderBackend>(config);
    set.image_fetch = std::make_shared<HttpImageFetchBackend>(config);
    set.image_gen = std::make_shared<OpenAiImageGenBackend>(config);
    return set;
}

}  // namespace orig::gateways
