// SPDX-License-Identifier: Apache-2.0
#include "support/fixtures.hpp"

#include <atomic>
#include <nlohmann/json.hpp>
#include <unistd.h>

#include "orig/common/io.hpp"

namespace orig::testsupport {

using gateways::InstructionRole;
using gateways::make_probe_png;
using nlohmann::json;

gateways::BackendSet ScriptedSet::as_backends() const {
    gateways::BackendSet set;
    set.model = model;
    set.text_search = text_search;
    set.image_search = image_search;
    set.page_reader = reader;
    set.image_fetch = image_fetch;
    set.image_gen = image_gen;
    return set;
}

ScriptedSet make_scripted_set() {
    ScriptedSet s;
    s.model = std::make_shared<gateways::ScriptedModelBackend>();
    s.text_search = std::make_shared<gateways::ScriptedSearchBackend>();
    s.image_search = std::make_shared<gateways::ScriptedSearchBackend>();
    s.reader = std::make_shared<gateways::ScriptedPageReaderBackend>();
    s.image_fetch = std::make_shared<gateways::ScriptedImageFetchBackend>();
    s.image_gen = std::make_shared<gateways::StubImageGenBackend>();
    return s;
}

std::vector<gateways::SearchHit> make_text_hits(const std::string& key, int count) {
    std::vector<gateways::SearchHit> hits;
    for (int i = 1; i <= count; ++i) {
        gateways::SearchHit h;
        h.rank = i;
        h.url = "https://example.org/" + key + "/page" + std::to_string(i);
        h.snippet = "Snippet " + std::to_string(i) + " about " + key;
        hits.push_back(std::move(h));
    }
    return hits;
}

std::vector<gateways::SearchHit> make_image_hits(const std::string& key, int count) {
    std::vector<gateways::SearchHit> hits;
    for (int i = 1; i <= count; ++i) {
        gateways::SearchHit h;
        h.rank = i;
        h.url = "https://example.org/" + key + "/gallery" + std::to_string(i);
        h.title = "Image " + std::to_string(i) + " of " + key;
        h.image_url = "https://img.example.org/" + key + "/img" + std::to_string(i) + ".png";
        hits.push_back(std::move(h));
    }
    return hits;
}

namespace {

void add_pages(ScriptedSet& s, const std::string& key, int count) {
    for (int i = 1; i <= count; ++i) {
        s.reader->set_page("https://example.org/" + key + "/page" + std::to_string(i),
                           "Full page content " + std::to_string(i) + " about " + key +
                               ". Factual statement " + key + "-" + std::to_string(i) + ".");
    }
}

void add_images(ScriptedSet& s, const std::string& key, int count, unsigned seed_base) {
    for (int i = 1; i <= count; ++i) {
        s.image_fetch->set_bytes("https://img.example.org/" + key + "/img" + std::to_string(i) +
                                     ".png",
                                 make_probe_png(32 + i, 24 + i, seed_base + static_cast<unsigned>(i)));
    }
}

pipeline::RunConfig offline_config() {
    pipeline::RunConfig cfg;
    cfg.backend = "stub";  // unused: tests inject scripted backends directly
    cfg.rate_limit_per_second = 1000;
    return cfg;
}

}  // namespace

Scenario make_scenario_a() {
    Scenario sc;
    sc.prompt.id = "frog-life-cycle";
    sc.prompt.text = "Generate a picture of a frog's life cycle";
    sc.config = offline_config();
    sc.config.policy = pipeline::IterationPolicy::adaptive();

    auto& b = sc.backends = make_scripted_set();

    // bootstrap: one text search with the raw prompt
    b.text_search->set_hits(sc.prompt.text, make_text_hits("frog-bootstrap", 3));
    add_pages(b, "frog-bootstrap", 3);
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [2, 1, 3]})");

    // round 1
    b.model->enqueue(InstructionRole::QueryPlanning, R"(
        {"sub_questions": ["What are the developmental stages of a frog?"],
         "text_queries": ["frog metamorphosis stages"],
         "image_queries": ["frog life cycle diagram"]})");
    b.text_search->set_hits("frog metamorphosis stages", make_text_hits("frog-stages", 3));
    add_pages(b, "frog-stages", 3);
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [1, 2, 3]})");
    b.image_search->set_hits("frog life cycle diagram", make_image_hits("frog-diagram", 4));
    add_images(b, "frog-diagram", 4, 100);
    b.model->enqueue(InstructionRole::TextFilter, R"({"keep": [1, 2]})");
    b.model->enqueue(InstructionRole::ImageFilter, R"({"keep": [1, 3]})");
    b.model->enqueue(InstructionRole::Sufficiency,
                     R"({"decision": "Retrieval", "rationale": "adult frog appearance missing"})");

    // round 2
    b.model->enqueue(InstructionRole::QueryPlanning, R"(
        {"sub_questions": ["What does the adult frog look like?"],
         "text_queries": ["adult frog appearance"],
         "image_queries": []})");
    b.text_search->set_hits("adult frog appearance", make_text_hits("frog-adult", 2));
    add_pages(b, "frog-adult", 2);
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [2, 1]})");
    b.model->enqueue(InstructionRole::TextFilter, R"({"keep": [1]})");
    b.model->enqueue(InstructionRole::Sufficiency,
                     R"({"decision": "Refine", "rationale": "stages and appearance covered"})");

    // prompt construction
    b.model->enqueue(InstructionRole::ContentRefine, R"(
        {"textual_features": ["egg mass floating in water", "tadpole with long tail",
                              "froglet with legs and short tail"],
         "keep_images": [1, 2]})");
    b.model->enqueue(InstructionRole::VisualRefine, R"(
        {"visual_features": ["circular arrangement of stages", "green adult frog on lily pad"]})");
    b.model->enqueue(InstructionRole::PromptExtend, R"(
        {"prompt": "A clear educational illustration of the frog life cycle: egg mass in water, tadpole with tail, froglet with legs, and adult green frog, arranged clockwise."})");
    return sc;
}

Scenario make_scenario_b() {
    Scenario sc;
    sc.prompt.id = "robot-handshake";
    sc.prompt.text = "Generate an image of two humanoid robots shaking hands";
    sc.config = offline_config();
    sc.config.policy = pipeline::IterationPolicy::fixed(1);

    auto& b = sc.backends = make_scripted_set();

    b.text_search->set_hits(sc.prompt.text, make_text_hits("robot-bootstrap", 3));
    add_pages(b, "robot-bootstrap", 3);
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [1, 2, 3]})");

    // round 1; page 1 of the planned query is dead, rank order substitutes
    b.model->enqueue(InstructionRole::QueryPlanning, R"(
        {"sub_questions": ["What do the two robots look like?"],
         "text_queries": ["humanoid robot specifications"],
         "image_queries": ["humanoid robot photo"]})");
    b.text_search->set_hits("humanoid robot specifications", make_text_hits("robot-specs", 3));
    add_pages(b, "robot-specs", 3);
    b.reader->set_dead("https://example.org/robot-specs/page1");
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [1, 2, 3]})");
    b.image_search->set_hits("humanoid robot photo", make_image_hits("robot-photo", 3));
    add_images(b, "robot-photo", 3, 200);
    b.model->enqueue(InstructionRole::TextFilter, R"({"keep": [1, 2]})");
    b.model->enqueue(InstructionRole::ImageFilter, R"({"keep": [2]})");
    // fixed policy: no sufficiency call

    b.model->enqueue(InstructionRole::ContentRefine, R"(
        {"textual_features": ["both robots have two arms and two legs",
                              "one robot is noticeably taller than the other"],
         "keep_images": [1]})");
    b.model->enqueue(InstructionRole::VisualRefine, R"(
        {"visual_features": ["metallic torso with visible joints"]})");
    b.model->enqueue(InstructionRole::PromptExtend, R"(
        {"prompt": "Two humanoid robots shaking hands, the taller one with a display face, both with articulated metal limbs, studio lighting."})");
    return sc;
}

Scenario make_scenario_c() {
    Scenario sc;
    sc.prompt.id = "empty-image-run";
    sc.prompt.text = "Generate a diagram of the water cycle";
    sc.config = offline_config();
    sc.config.policy = pipeline::IterationPolicy::adaptive();
    sc.config.skip_generation = true;

    auto& b = sc.backends = make_scripted_set();

    b.text_search->set_hits(sc.prompt.text, make_text_hits("water-bootstrap", 1));
    add_pages(b, "water-bootstrap", 1);
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [1]})");

    // round 1: text only, and the filter keeps nothing
    b.model->enqueue(InstructionRole::QueryPlanning, R"(
        {"sub_questions": ["Which stages must the diagram show?"],
         "text_queries": ["water cycle stages evaporation condensation"],
         "image_queries": []})");
    b.text_search->set_hits("water cycle stages evaporation condensation",
                            make_text_hits("water-stages", 2));
    add_pages(b, "water-stages", 2);
    b.model->enqueue(InstructionRole::Bootstrap, R"({"ranking": [1, 2]})");
    b.model->enqueue(InstructionRole::TextFilter, R"({"keep": []})");
    b.model->enqueue(InstructionRole::Sufficiency,
                     R"({"decision": "Refine", "rationale": "bootstrap evidence suffices"})");

    // no images anywhere: VisualRefine must be skipped
    b.model->enqueue(InstructionRole::ContentRefine, R"(
        {"textual_features": ["evaporation from a lake", "condensation into clouds",
                              "precipitation as rain"],
         "keep_images": []})");
    b.model->enqueue(InstructionRole::PromptExtend, R"(
        {"prompt": "A labeled diagram of the water cycle showing evaporation, condensation and precipitation with arrows."})");
    return sc;
}

pipeline::RunEnvironment make_scripted_environment(const Scenario& scenario) {
    pipeline::RunEnvironment env;
    env.backends = scenario.backends.as_backends();
    env.time = std::make_shared<LogicalTimeSource>();
    env.wait_clock = std::make_shared<VirtualWaitClock>();
    env.limiters = std::make_shared<gateways::RateLimiterSet>(
        scenario.config.rate_limit_per_second, env.wait_clock);
    if (scenario.config.cassette_mode == gateways::CassetteMode::Passthrough) {
        env.cassette = std::make_shared<gateways::Cassette>();
    } else {
        env.cassette = std::make_shared<gateways::Cassette>(scenario.config.cassette_mode,
                                                            scenario.config.cassette_path,
                                                            scenario.config.resume);
    }
    return env;
}

pipeline::RunBundle run_scenario(Scenario& scenario, const std::filesystem::path& run_dir) {
    pipeline::PipelineRunner runner(scenario.config, run_dir, make_scripted_environment(scenario));
    return runner.run(scenario.prompt);
}

std::filesystem::path fresh_temp_dir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("orig_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter.fetch_add(1)));
    std::filesystem::remove_all(dir);
    io::ensure_dir(dir);
    return dir;
}

}  // namespace orig::testsupport
