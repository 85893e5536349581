// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/scripted.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/common/strings.hpp"

namespace orig::gateways {

using nlohmann::json;

// --- scripted -----------------------------------------------------------

void ScriptedModelBackend::enqueue(InstructionRole role, std::string response) {
    std::lock_guard lock(mu_);
    queues_[role].push_back({false, std::move(response)});
}

void ScriptedModelBackend::enqueue_failure(InstructionRole role, std::string message) {
    std::lock_guard lock(mu_);
    queues_[role].push_back({true, std::move(message)});
}

BackendResponse ScriptedModelBackend::complete(InstructionRole role, const std::string&,
                                               const std::vector<AttachedImage>&) {
    std::lock_guard lock(mu_);
    ++calls_[role];
    auto& queue = queues_[role];
    if (queue.empty()) {
        throw std::logic_error(std::string("scripted model: no response queued for role ") +
                               to_string(role));
    }
    const Scripted next = queue.front();
    queue.pop_front();
    if (next.fail) throw GatewayError(next.text);
    return {next.text, std::nullopt, std::nullopt};
}

int ScriptedModelBackend::calls(InstructionRole role) const {
    std::lock_guard lock(mu_);
    const auto it = calls_.find(role);
    return it == calls_.end() ? 0 : it->second;
}

int ScriptedModelBackend::total_calls() const {
    std::lock_guard lock(mu_);
    int total = 0;
    for (const auto& [role, n] : calls_) total += n;
    return total;
}

void ScriptedSearchBackend::set_hits(const std::string& query, std::vector<SearchHit> hits) {
    std::lock_guard lock(mu_);
    hits_[query] = std::move(hits);
}

void ScriptedSearchBackend::set_failure(const std::string& query, int times) {
    std::lock_guard lock(mu_);
    failures_left_[query] = times;
}

BackendResponse ScriptedSearchBackend::search(const std::string& query) {
    std::lock_guard lock(mu_);
    if (auto it = failures_left_.find(query); it != failures_left_.end() && it->second > 0) {
        --it->second;
        throw GatewayError("scripted search failure for query: " + query);
    }
    const auto it = hits_.find(query);
    if (it == hits_.end()) {
        throw std::logic_error("scripted search: no hits scripted for query: " + query);
    }
    return {hits_to_json(it->second), std::nullopt, std::nullopt};
}

void ScriptedPageReaderBackend::set_page(const std::string& url, std::string content) {
    std::lock_guard lock(mu_);
    pages_[url] = std::move(content);
}

void ScriptedPageReaderBackend::set_dead(const std::string& url) {
    std::lock_guard lock(mu_);
    dead_[url] = true;
}

BackendResponse ScriptedPageReaderBackend::fetch(const std::string& url) {
    std::lock_guard lock(mu_);
    if (dead_.count(url) > 0) throw GatewayError("scripted dead page: " + url);
    const auto it = pages_.find(url);
    if (it == pages_.end()) throw std::logic_error("scripted reader: no page scripted for " + url);
    return {it->second, std::nullopt, std::nullopt};
}

void ScriptedImageFetchBackend::set_bytes(const std::string& url, std::string bytes) {
    std::lock_guard lock(mu_);
    images_[url] = std::move(bytes);
}

void ScriptedImageFetchBackend::set_dead(const std::string& url) {
    std::lock_guard lock(mu_);
    dead_[url] = true;
}

BackendResponse ScriptedImageFetchBackend::fetch(const std::string& url) {
    std::lock_guard lock(mu_);
    if (dead_.count(url) > 0) throw GatewayError("scripted dead image link: " + url);
    const auto it = images_.find(url);
    if (it == images_.end()) {
        throw std::logic_error("scripted image fetch: no bytes scripted for " + url);
    }
    return {it->second, std::nullopt, std::nullopt};
}

// --- stubs ----------------------------------------------------------------

namespace {

std::string short_hash(const std::string& s) { return hashing::sha256_hex(s).substr(0, 12); }

// Pulls the text following "<label>" up to end of line; used by the stub
// model to echo the user prompt from the rendered instruction.
std::string extract_after(const std::string& rendered, const std::string& label) {
    const auto pos = rendered.find(label);
    if (pos == std::string::npos) return "";
    const auto start = pos + label.size();
    const auto end = rendered.find('\n', start);
    return strings::trim(rendered.substr(start, end == std::string::npos ? std::string::npos
                                                                         : end - start));
}

}  // namespace

std::string make_probe_png(int width, int height, unsigned seed) {
    std::string bytes;
    bytes += "\x89PNG\r\n\x1a\n";
    // IHDR length + tag
    bytes += std::string("\x00\x00\x00\x0D", 4);
    bytes += "IHDR";
    const auto be32 = [](unsigned v) {
        std::string s(4, '\0');
        s[0] = static_cast<char>((v >> 24) & 0xFF);
        s[1] = static_cast<char>((v >> 16) & 0xFF);
        s[2] = static_cast<char>((v >> 8) & 0xFF);
        s[3] = static_cast<char>(v & 0xFF);
        return s;
    };
    bytes += be32(static_cast<unsigned>(width));
    bytes += be32(static_cast<unsigned>(height));
    bytes += std::string("\x08\x02\x00\x00\x00", 5);  // bit depth, color type, filler
    bytes += be32(seed);                              // stands in for the CRC; varies content
    return bytes;
}

BackendResponse StubModelBackend::complete(InstructionRole role, const std::string& rendered,
                                           const std::vector<AttachedImage>&) {
    json j;
    switch (role) {
        case InstructionRole::Bootstrap:
            j = {{"ranking", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}};
            break;
        case InstructionRole::QueryPlanning: {
            const auto prompt = extract_after(rendered, "Prompt: ");
            j = {{"sub_questions", {"What factual details ground this prompt?"}},
                 {"text_queries", {prompt + " facts"}},
                 {"image_queries", {prompt + " reference photo"}}};
            break;
        }
        case InstructionRole::TextFilter:
        case InstructionRole::ImageFilter:
            j = {{"keep", {1}}};
            break;
        case InstructionRole::Sufficiency:
            j = {{"decision", "Refine"}, {"rationale", "stub backend always stops after one round"}};
            break;
        case InstructionRole::ContentRefine:
            j = {{"textual_features", {"stub textual feature"}}, {"keep_images", {1}}};
            break;
        case InstructionRole::VisualRefine:
            j = {{"visual_features", {"stub visual feature"}}};
            break;
        case InstructionRole::PromptExtend: {
            const auto prompt = extract_after(rendered, "Original prompt: ");
            j = {{"prompt", prompt.empty() ? std::string("stub enriched prompt")
                                           : prompt + " -- grounded in stub evidence"}};
            break;
        }
        case InstructionRole::QaJudge:
        case InstructionRole::AlignmentJudge:
            return {"True", std::nullopt, std::nullopt};
    }
    return {j.dump(), std::nullopt, std::nullopt};
}

BackendResponse StubSearchBackend::search(const std::string& query) {
    const auto key = short_hash(query);
    std::vector<SearchHit> hits;
    for (int i = 1; i <= hits_; ++i) {
        SearchHit h;
        h.rank = i;
        if (kind_ == Kind::Text) {
            h.url = "https://stub.example.org/" + key + "/page" + std::to_string(i);
            h.snippet = "Stub snippet " + std::to_string(i) + " for: " + query;
        } else {
            h.url = "https://stub.example.org/" + key + "/gallery" + std::to_string(i);
            h.title = "Stub image " + std::to_string(i) + " for: " + query;
            h.image_url = "https://img.stub.example.org/" + key + "/" + std::to_string(i) + ".png";
        }
        hits.push_back(std::move(h));
    }
    return {hits_to_json(hits), std::nullopt, std::nullopt};
}

BackendResponse StubPageReaderBackend::fetch(const std::string& url) {
    return {"Stub page content for " + url + ". Deterministic fact sheet: item " +
                short_hash(url) + ".",
            std::nullopt, std::nullopt};
}

BackendResponse StubImageFetchBackend::fetch(const std::string& url) {
    unsigned seed = 0;
    for (const char c : hashing::sha256_hex(url).substr(0, 8)) seed = seed * 31 + static_cast<unsigned char>(c);
    return {make_probe_png(64, 48, seed), std::nullopt, std::nullopt};
}

BackendResponse StubImageGenBackend::generate(const std::string& prompt,
                                              const std::vector<AttachedImage>& reference_images) {
    json refs = json::array();
    for (const auto& [hash, bytes] : reference_images) refs.push_back(hash);
    const json manifest = {{"generator", "stub"},
                           {"prompt_sha256", hashing::sha256_hex(prompt)},
                           {"reference_hashes", refs}};
    return {manifest.dump(), std::nullopt, std::nullopt};
}

BackendSet make_stub_backends() {
    BackendSet set;
    set.model = std::make_shared<StubModelBackend>();
    set.text_search = std::make_shared<StubSearchBackend>(StubSearchBackend::Kind::Text);
    set.image_search = std::make_shared<StubSearchBackend>(StubSearchBackend::Kind::Image);
    set.page_reader = std::make_shared<StubPageReaderBackend>();
    set.image_fetch = std::make_shared<StubImageFetchBackend>();
    set.image_gen = std::make_shared<StubImageGenBackend>();
    return set;
}

}  // namespace orig::gateways
