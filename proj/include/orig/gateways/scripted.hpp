// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "orig/gateways/backends.hpp"

namespace orig::gateways {

// --- Scripted backends -------------------------------------------------
//
// Deterministic backends driven by enqueued responses. Used to author
// cassettes and to exercise failure paths; a response scripted with fail()
// throws GatewayError when dequeued.

class ScriptedModelBackend final : public ModelBackend {
public:
    void enqueue(InstructionRole role, std::string response);
    void enqueue_failure(InstructionRole role, std::string message = "scripted transport failure");

    BackendResponse complete(InstructionRole role, const std::string& rendered_prompt,
                             const std::vector<AttachedImage>& images) override;

    int calls(InstructionRole role) const;
    int total_calls() const;

private:
    struct Scripted {
        bool fail = false;
        std::string text;
    };
    mutable std::mutex mu_;
    std::map<InstructionRole, std::deque<Scripted>> queues_;
    std::map<InstructionRole, int> calls_;
};

class ScriptedSearchBackend final : public SearchBackend {
public:
    void set_hits(const std::string& query, std::vector<SearchHit> hits);
    void set_failure(const std::string& query, int times = 1000000);

    BackendResponse search(const std::string& query) override;

private:
    std::mutex mu_;
    std::map<std::string, std::vector<SearchHit>> hits_;
    std::map<std::string, int> failures_left_;
};

class ScriptedPageReaderBackend final : public PageReaderBackend {
public:
    void set_page(const std::string& url, std::string content);
    void set_dead(const std::string& url);

    BackendResponse fetch(const std::string& url) override;

private:
    std::mutex mu_;
    std::map<std::string, std::string> pages_;
    std::map<std::string, bool> dead_;
};

class ScriptedImageFetchBackend final : public ImageFetchBackend {
public:
    void set_bytes(const std::string& url, std::string bytes);
    void set_dead(const std::string& url);

    BackendResponse fetch(const std::string& url) override;

private:
    std::mutex mu_;
    std::map<std::string, std::string> images_;
    std::map<std::string, bool> dead_;
};

// --- Stub backends ------------------------------------------------------
//
// Fully offline, schema-valid defaults keyed only on the request. They make
// `run --set gateways.backend=stub` work end to end with no configuration
// and no network; useful for smoke runs and for recording demo cassettes.

class StubModelBackend final : public ModelBackend {
public:
    BackendResponse complete(InstructionRole role, const std::string& rendered_prompt,
                             const std::vector<AttachedImage>& images) override;
};

class StubSearchBackend final : public SearchBackend {
public:
    // kind selects text-hit or image-hit shape.
    enum class Kind { Text, Image };
    explicit StubSearchBackend(Kind kind, int hit_count = 3) : kind_(kind), hits_(hit_count) {}

    BackendResponse search(const std::string& query) override;

private:
    Kind kind_;
    int hits_;
};

class StubPageReaderBackend final : public PageReaderBackend {
public:
    BackendResponse fetch(const std::string& url) override;
};

class StubImageFetchBackend final : public ImageFetchBackend {
public:
    BackendResponse fetch(const std::string& url) override;
};

// Echo stub: returns a deterministic manifest of the generation inputs.
class StubImageGenBackend final : public ImageGenBackend {
public:
    BackendResponse generate(const std::string& prompt,
                             const std::vector<AttachedImage>& reference_images) override;
};

BackendSet make_stub_backends();

// Minimal bytes that probe as a valid PNG of the given size; the seed is
// embedded so different seeds yield different content hashes.
std::string make_probe_png(int width, int height, unsigned seed);

}  // namespace orig::gateways
