// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "orig/common/hashing.hpp"
#include "orig/common/strings.hpp"
#include "orig/gateways/hub.hpp"
#include "support/fixtures.hpp"

using namespace orig;
using namespace orig::gateways;
using orig::testsupport::fresh_temp_dir;
using orig::testsupport::make_scripted_set;

namespace {

struct HubHarness {
    testsupport::ScriptedSet scripted = make_scripted_set();
    std::shared_ptr<Cassette> cassette = std::make_shared<Cassette>();
    std::shared_ptr<TimeSource> time = std::make_shared<LogicalTimeSource>();
    std::shared_ptr<VirtualWaitClock> wait = std::make_shared<VirtualWaitClock>();
    std::shared_ptr<RateLimiterSet> limiters =
        std::make_shared<RateLimiterSet>(1000, wait);

    GatewayHub make(GatewayHubConfig cfg = {}) {
        return GatewayHub(cfg, scripted.as_backends(), cassette, time, limiters, wait);
    }
};

}  // namespace

TEST_CASE("replay returns the recorded response byte for byte") {
    const auto dir = fresh_temp_dir("hub_replay");
    const auto path = dir / "cassette.jsonl";
    const std::map<std::string, std::string> vars = {
        {"prompt", "p"}, {"knowledge", "k"}, {"questions", "q"}};

    std::string recorded_fp;
    {
        HubHarness h;
        h.cassette = std::make_shared<Cassette>(CassetteMode::Record, path);
        h.scripted.model->enqueue(InstructionRole::Sufficiency, R"({"decision":"Refine"})");
        auto hub = h.make();
        const auto ex = hub.model_invoke(InstructionRole::Sufficiency, vars);
        CHECK(ex.raw_response == R"({"decision":"Refine"})");
        recorded_fp = Cassette::read_file(path).at(0).fingerprint;
    }

    HubHarness h2;
    h2.cassette = std::make_shared<Cassette>(CassetteMode::Replay, path);
    auto hub = h2.make();  // no scripted responses: replay never touches backends
    const auto ex = hub.model_invoke(InstructionRole::Sufficiency, vars);
    CHECK(ex.raw_response == R"({"decision":"Refine"})");

    // fingerprint is reproducible from the same rendered inputs
    const auto expected_fp = hashing::fingerprint(
        "model:Sufficiency", "Sufficiency", render_instruction(InstructionRole::Sufficiency, vars),
        {});
    CHECK(recorded_fp == expected_fp);
}

TEST_CASE("identical requests in record mode produce equal fingerprints") {
    const auto dir = fresh_temp_dir("hub_fp");
    const auto path = dir / "cassette.jsonl";
    HubHarness h;
    h.cassette = std::make_shared<Cassette>(CassetteMode::Record, path);
    h.scripted.model->enqueue(InstructionRole::Sufficiency, "first");
    h.scripted.model->enqueue(InstructionRole::Sufficiency, "second");
    auto hub = h.make();
    const std::map<std::string, std::string> vars = {
        {"prompt", "p"}, {"knowledge", "k"}, {"questions", "q"}};
    hub.model_invoke(InstructionRole::Sufficiency, vars);
    hub.model_invoke(InstructionRole::Sufficiency, vars);
    const auto entries = Cassette::read_file(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].fingerprint == entries[1].fingerprint);
    CHECK(entries[0].response != entries[1].response);
}

TEST_CASE("bounded retries then success, counting attempts") {
    HubHarness h;
    h.scripted.model->enqueue_failure(InstructionRole::Sufficiency);
    h.scripted.model->enqueue_failure(InstructionRole::Sufficiency);
    h.scripted.model->enqueue(InstructionRole::Sufficiency, R"({"decision":"Refine"})");
    GatewayHubConfig cfg;
    cfg.retry_attempts = 3;
    auto hub = h.make(cfg);
    const auto ex = hub.model_invoke(InstructionRole::Sufficiency,
                                     {{"prompt", "p"}, {"knowledge", "k"}, {"questions", "q"}});
    CHECK(ex.raw_response == R"({"decision":"Refine"})");
    CHECK(h.scripted.model->calls(InstructionRole::Sufficiency) == 3);
}

TEST_CASE("retry exhaustion raises a gateway error and records a failure entry") {
    const auto dir = fresh_temp_dir("hub_exhaust");
    const auto path = dir / "cassette.jsonl";
    {
        HubHarness h;
        h.cassette = std::make_shared<Cassette>(CassetteMode::Record, path);
        for (int i = 0; i < 3; ++i) h.scripted.text_search->set_failure("q", 100);
        GatewayHubConfig cfg;
        cfg.retry_attempts = 3;
        auto hub = h.make(cfg);
        CHECK_THROWS_AS(hub.search_text("q"), GatewayError);
        const auto entries = Cassette::read_file(path);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].service == "search_text!fail");
    }
    // the recorded failure replays as the same failure
    HubHarness h2;
    h2.cassette = std::make_shared<Cassette>(CassetteMode::Replay, path);
    auto hub2 = h2.make();
    CHECK_THROWS_AS(hub2.search_text("q"), GatewayError);
}

TEST_CASE("search preconditions and hit handling") {
    HubHarness h;
    auto hub = h.make();
    CHECK_THROWS_AS(hub.search_text("   "), PreconditionError);  // no backend call
    CHECK_THROWS_AS(hub.search_images(""), PreconditionError);

    h.scripted.text_search->set_hits("twelve", testsupport::make_text_hits("twelve", 12));
    const auto capped = hub.search_text("twelve");
    REQUIRE(capped.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(capped[i].rank == i + 1);

    h.scripted.text_search->set_hits("three", testsupport::make_text_hits("three", 3));
    const auto three = hub.search_text("three");
    REQUIRE(three.size() == 3);
    CHECK(three[2].rank == 3);
}

TEST_CASE("token accounting falls back to the whitespace estimator") {
    HubHarness h;
    h.scripted.model->enqueue(InstructionRole::Sufficiency, "one two three");
    auto hub = h.make();
    const std::map<std::string, std::string> vars = {
        {"prompt", "p"}, {"knowledge", "k"}, {"questions", "q"}};
    const auto ex = hub.model_invoke(InstructionRole::Sufficiency, vars);
    CHECK(ex.output_tokens == 3);
    CHECK(ex.input_tokens == strings::approx_token_count(ex.rendered_prompt));
    CHECK(ex.latency_ms > 0);  // logical clock advances
}

TEST_CASE("observer receives per-exchange stats") {
    HubHarness h;
    h.scripted.text_search->set_hits("q", testsupport::make_text_hits("q", 2));
    auto hub = h.make();
    std::vector<ExchangeStats> seen;
    hub.set_observer([&](const ExchangeStats& s) { seen.push_back(s); });
    hub.search_text("q");
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].service == service::kTextSearch);
    CHECK_FALSE(seen[0].role.has_value());
    CHECK(seen[0].tokens_in == 0);
}
