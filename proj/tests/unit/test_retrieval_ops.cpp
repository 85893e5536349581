// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "orig/common/hashing.hpp"
#include "orig/common/io.hpp"
#include "orig/gateways/retrieval_ops.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace orig;
using namespace orig::gateways;
using orig::testsupport::fresh_temp_dir;
using orig::testsupport::make_image_hits;
using orig::testsupport::make_scripted_set;
using orig::testsupport::make_text_hits;

namespace {

struct OpsHarness {
    testsupport::ScriptedSet scripted = make_scripted_set();
    std::shared_ptr<Cassette> cassette = std::make_shared<Cassette>();
    std::shared_ptr<TimeSource> time = std::make_shared<LogicalTimeSource>();
    std::shared_ptr<VirtualWaitClock> wait = std::make_shared<VirtualWaitClock>();
    std::shared_ptr<RateLimiterSet> limiters = std::make_shared<RateLimiterSet>(1000, wait);

    GatewayHub make() {
        return GatewayHub({}, scripted.as_backends(), cassette, time, limiters, wait);
    }
};

}  // namespace

TEST_CASE("rank_and_fetch_pages follows the model ranking") {
    OpsHarness h;
    const auto hits = make_text_hits("rf", 10);
    for (int i = 1; i <= 10; ++i) {
        h.scripted.reader->set_page("https://example.org/rf/page" + std::to_string(i),
                                    "content of page " + std::to_string(i));
    }
    h.scripted.model->enqueue(InstructionRole::Bootstrap, R"({"ranking":[3,7]})");
    auto hub = h.make();
    const auto pages = rank_and_fetch_pages(hub, "prompt", hits, 2, "query");
    REQUIRE(pages.size() == 2);
    CHECK(pages[0].source_url == "https://example.org/rf/page3");
    CHECK(pages[1].source_url == "https://example.org/rf/page7");
    CHECK(pages[0].content == "content of page 3");
    CHECK(pages[0].query_of_origin == "query");
    CHECK(pages[0].snippet == hits[2].snippet);
    CHECK_FALSE(pages[0].retrieved_at.empty());
}

TEST_CASE("dead links substitute the next ranked candidate") {
    OpsHarness h;
    const auto hits = make_text_hits("sub", 5);
    for (int i = 1; i <= 5; ++i) {
        h.scripted.reader->set_page("https://example.org/sub/page" + std::to_string(i),
                                    "page " + std::to_string(i));
    }
    h.scripted.reader->set_dead("https://example.org/sub/page1");
    h.scripted.model->enqueue(InstructionRole::Bootstrap, R"({"ranking":[1,2]})");
    auto hub = h.make();
    std::vector<std::string> warnings;
    const auto pages = rank_and_fetch_pages(hub, "prompt", hits, 2, "query",
                                            [&](const std::string& w) { warnings.push_back(w); });
    REQUIRE(pages.size() == 2);
    // ranked [1,2], 1 dead, partial ranking completed in rank order: 2 then 3
    CHECK(pages[0].source_url == "https://example.org/sub/page2");
    CHECK(pages[1].source_url == "https://example.org/sub/page3");
    CHECK(!warnings.empty());
}

TEST_CASE("empty hits short-circuit without a model call") {
    OpsHarness h;  // nothing scripted: a model call would throw logic_error
    auto hub = h.make();
    CHECK(rank_and_fetch_pages(hub, "prompt", {}, 2, "query").empty());
    CHECK_THROWS_AS(rank_and_fetch_pages(hub, "p", {}, 0, "q"), PreconditionError);
}

TEST_CASE("all pages unreachable yields empty plus warning") {
    OpsHarness h;
    const auto hits = make_text_hits("dead", 3);
    for (int i = 1; i <= 3; ++i) h.scripted.reader->set_dead("https://example.org/dead/page" + std::to_string(i));
    h.scripted.model->enqueue(InstructionRole::Bootstrap, R"({"ranking":[1,2,3]})");
    auto hub = h.make();
    std::vector<std::string> warnings;
    CHECK(rank_and_fetch_pages(hub, "prompt", hits, 2, "q",
                               [&](const std::string& w) { warnings.push_back(w); })
              .empty());
    CHECK(warnings.size() >= 3);
}

TEST_CASE("select_images keeps the first k accessible unique images in rank order") {
    OpsHarness h;
    const auto dir = fresh_temp_dir("select");
    knowledge::BlobStore blobs(dir / "blobs");
    const auto hits = make_image_hits("sel", 10);
    const auto url_of = [](int i) {
        return "https://img.example.org/sel/img" + std::to_string(i) + ".png";
    };
    std::map<std::string, std::string> bytes_by_url;
    for (int i = 1; i <= 10; ++i) {
        if (i == 3 || i == 4) {
            h.scripted.image_fetch->set_dead(url_of(i));
            continue;
        }
        // 6 duplicates 1, 7 duplicates 2
        const int seed = i == 6 ? 1 : (i == 7 ? 2 : i);
        const auto bytes = make_probe_png(10 + seed, 10, static_cast<unsigned>(seed));
        h.scripted.image_fetch->set_bytes(url_of(i), bytes);
        bytes_by_url[url_of(i)] = bytes;
    }
    auto hub = h.make();
    const auto selected = select_images(hub, blobs, hits, 5, "query");

    std::vector<std::string> urls;
    for (const auto& im : selected) urls.push_back(im.source_url);
    std::vector<std::string> rank_urls;
    for (int i = 1; i <= 10; ++i) rank_urls.push_back(url_of(i));
    CHECK(urls == testsupport::first_k_unique_oracle(rank_urls, bytes_by_url, 5));
    CHECK(urls == std::vector<std::string>{url_of(1), url_of(2), url_of(5), url_of(8), url_of(9)});

    for (const auto& im : selected) {
        CHECK(blobs.get(im.bytes_ref).size() > 0);
        CHECK(im.mime == "image/png");
        CHECK(im.width > 0);
    }
}

TEST_CASE("select_images matches the oracle on randomized fixtures") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 100; ++trial) {
        OpsHarness h;
        const auto dir = fresh_temp_dir("selr" + std::to_string(trial));
        knowledge::BlobStore blobs(dir / "blobs");
        const int n = 1 + static_cast<int>(rng() % 10);
        const auto hits = make_image_hits("r" + std::to_string(trial), n);
        std::map<std::string, std::string> bytes_by_url;
        std::vector<std::string> rank_urls;
        for (int i = 1; i <= n; ++i) {
            const auto url = hits[i - 1].image_url;
            rank_urls.push_back(url);
            const int kind = static_cast<int>(rng() % 4);
            if (kind == 0) {
                h.scripted.image_fetch->set_dead(url);
            } else if (kind == 1) {
                // duplicate of a small seed pool
                const auto bytes = make_probe_png(8, 8, rng() % 3);
                h.scripted.image_fetch->set_bytes(url, bytes);
                bytes_by_url[url] = bytes;
            } else if (kind == 2) {
                h.scripted.image_fetch->set_bytes(url, "not an image");  // undecodable
            } else {
                const auto bytes = make_probe_png(9, 9, 1000 + rng() % 100000);
                h.scripted.image_fetch->set_bytes(url, bytes);
                bytes_by_url[url] = bytes;
            }
        }
        const int keep = 1 + static_cast<int>(rng() % 6);
        auto hub = h.make();
        const auto selected = select_images(hub, blobs, hits, keep, "q");

        std::vector<std::string> urls;
        std::set<std::string> hashes;
        for (const auto& im : selected) {
            urls.push_back(im.source_url);
            CHECK(hashes.insert(im.content_hash).second);  // pairwise distinct
        }
        CHECK(static_cast<int>(selected.size()) <= keep);
        CHECK(urls == testsupport::first_k_unique_oracle(rank_urls, bytes_by_url, keep));
    }
}

TEST_CASE("generate_artifact echoes inputs through the stub backend") {
    OpsHarness h;
    const auto dir = fresh_temp_dir("genart");
    auto hub = h.make();

    const std::string ref_bytes = make_probe_png(5, 5, 42);
    const auto ref_hash = hashing::sha256_hex(ref_bytes);
    const auto artifact = generate_artifact(hub, "x", {{ref_hash, ref_bytes}}, dir);

    CHECK(artifact.prompt_sha256 == hashing::sha256_hex("x"));
    CHECK(artifact.reference_hashes == std::vector<std::string>{ref_hash});
    CHECK_FALSE(artifact.response_is_image);
    REQUIRE(io::exists(artifact.manifest_file));
    const auto manifest = nlohmann::json::parse(io::read_file(artifact.manifest_file));
    CHECK(manifest["prompt_sha256"] == hashing::sha256_hex("x"));
    CHECK(manifest["reference_hashes"][0] == ref_hash);

    const auto echoed = nlohmann::json::parse(io::read_file(artifact.artifact_file));
    CHECK(echoed["prompt_sha256"] == hashing::sha256_hex("x"));

    CHECK_THROWS_AS(generate_artifact(hub, "  ", {}, dir), PreconditionError);
}
