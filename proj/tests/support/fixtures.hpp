// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "orig/gateways/scripted.hpp"
#include "orig/pipeline/runner.hpp"

namespace orig::testsupport {

// Scripted backends plus strongly-typed handles for scripting and call
// counting from tests.
struct ScriptedSet {
    std::shared_ptr<gateways::ScriptedModelBackend> model;
    std::shared_ptr<gateways::ScriptedSearchBackend> text_search;
    std::shared_ptr<gateways::ScriptedSearchBackend> image_search;
    std::shared_ptr<gateways::ScriptedPageReaderBackend> reader;
    std::shared_ptr<gateways::ScriptedImageFetchBackend> image_fetch;
    std::shared_ptr<gateways::StubImageGenBackend> image_gen;

    gateways::BackendSet as_backends() const;
};

ScriptedSet make_scripted_set();

// A fully scripted pipeline scenario: prompt, config and loaded backends.
struct Scenario {
    knowledge::UserPrompt prompt;
    pipeline::RunConfig config;
    ScriptedSet backends;
};

// Golden scenario A: adaptive policy, two loop rounds (decisions
// [Retrieval, Refine]), text and image evidence, stub generation.
Scenario make_scenario_a();

// Golden scenario B: fixed(1) policy, one loop round, one dead page link
// exercising ranked substitution and a recorded failure entry.
Scenario make_scenario_b();

// Golden scenario C: degenerate run that never acquires an image; the
// visual-refine stage is skipped and generation is disabled.
Scenario make_scenario_c();

// Environment wired to scripted backends with logical time and a virtual
// wait clock; cassette mode per config (path must be set for record/replay).
pipeline::RunEnvironment make_scripted_environment(const Scenario& scenario);

// Text search hits fixture (urls page<i>, distinct snippets).
std::vector<gateways::SearchHit> make_text_hits(const std::string& key, int count);

// Image search hits fixture (image_url img<i>.png).
std::vector<gateways::SearchHit> make_image_hits(const std::string& key, int count);

// Runs a scenario end to end in a fresh temp dir; returns the bundle.
pipeline::RunBundle run_scenario(Scenario& scenario, const std::filesystem::path& run_dir);

// Unique scratch directory under the system temp root.
std::filesystem::path fresh_temp_dir(const std::string& tag);

}  // namespace orig::testsupport
