// SPDX-License-Identifier: Apache-2.0
#include "orig/pipeline/state_io.hpp"

#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"

namespace orig::pipeline {

using nlohmann::json;

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Bootstrapping: return "bootstrapping";
        case RunStatus::Looping: return "looping";
        case RunStatus::Refining: return "refining";
        case RunStatus::Generating: return "generating";
        case RunStatus::Done: return "done";
        case RunStatus::Failed: return "failed";
    }
    return "unknown";
}

std::optional<RunStatus> run_status_from_string(const std::string& s) {
    if (s == "bootstrapping") return RunStatus::Bootstrapping;
    if (s == "looping") return RunStatus::Looping;
    if (s == "refining") return RunStatus::Refining;
    if (s == "generating") return RunStatus::Generating;
    if (s == "done") return RunStatus::Done;
    if (s == "failed") return RunStatus::Failed;
    return std::nullopt;
}

bool RunBundle::has_event(const std::string& kind) const {
    for (const auto& e : events) {
        if (e.kind == kind) return true;
    }
    return false;
}

std::string enriched_prompt_json(const EnrichedPrompt& enriched) {
    json hashes = json::array();
    for (const auto& im : enriched.refined_images) hashes.push_back(im.content_hash);
    const json j = {{"prompt_text", enriched.prompt_text},
                    {"textual_features", enriched.textual_features},
                    {"visual_features", enriched.visual_features},
                    {"refined_image_hashes", hashes},
                    {"source_prompt_id", enriched.source_prompt_id}};
    return j.dump(2) + "\n";
}

EnrichedPrompt enriched_prompt_from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("enriched prompt: invalid JSON: ") + e.what());
    }
    EnrichedPrompt out;
    out.prompt_text = j.at("prompt_text").get<std::string>();
    out.textual_features = j.at("textual_features").get<std::vector<std::string>>();
    out.visual_features = j.at("visual_features").get<std::vector<std::string>>();
    out.source_prompt_id = j.at("source_prompt_id").get<std::string>();
    // refined images carry hashes only; the caller rebinds them via the kb
    for (const auto& h : j.at("refined_image_hashes")) {
        knowledge::ImageEvidence im;
        im.content_hash = h.get<std::string>();
        im.bytes_ref = im.content_hash;
        out.refined_images.push_back(std::move(im));
    }
    return out;
}

namespace {

json prompt_to_json(const knowledge::UserPrompt& p) {
    json j = {{"id", p.id}, {"text", p.text}};
    if (p.entity_class) j["entity_class"] = knowledge::to_string(*p.entity_class);
    json tags = json::array();
    for (const auto t : p.concept_tags) tags.push_back(knowledge::to_string(t));
    j["concept_tags"] = tags;
    return j;
}

knowledge::UserPrompt prompt_from_json(const json& j) {
    knowledge::UserPrompt p;
    p.id = j.at("id").get<std::string>();
    p.text = j.at("text").get<std::string>();
    if (j.contains("entity_class")) {
        p.entity_class = knowledge::entity_class_from_string(j["entity_class"].get<std::string>());
    }
    if (j.contains("concept_tags")) {
        for (const auto& t : j["concept_tags"]) {
            if (const auto tag = knowledge::concept_from_string(t.get<std::string>())) {
                p.concept_tags.insert(*tag);
            }
        }
    }
    return p;
}

json events_to_json(const std::vector<RunEvent>& events) {
    json arr = json::array();
    for (const auto& e : events) {
        arr.push_back({{"kind", e.kind}, {"message", e.message}, {"round", e.round}});
    }
    return arr;
}

std::vector<RunEvent> events_from_json(const json& arr) {
    std::vector<RunEvent> out;
    for (const auto& e : arr) {
        out.push_back({e.at("kind").get<std::string>(), e.at("message").get<std::string>(),
                       e.at("round").get<int>()});
    }
    return out;
}

}  // namespace

std::string events_json(const std::vector<RunEvent>& events) {
    return events_to_json(events).dump(2) + "\n";
}

void save_state(const Checkpoint& state, const std::filesystem::path& path) {
    json decisions = json::array();
    for (const auto& d : state.decisions) {
        decisions.push_back(
            {{"value", d.value == gateways::Decision::Retrieval ? "Retrieval" : "Refine"},
             {"rationale", d.rationale}});
    }
    const json j = {{"version", 1},
                    {"next_status", to_string(state.next_status)},
                    {"rounds_completed", state.rounds_completed},
                    {"prompt", prompt_to_json(state.prompt)},
                    {"pending_questions", state.pending_questions},
                    {"decisions", decisions},
                    {"events", events_to_json(state.events)},
                    {"raw_retrieved_hashes",
                     std::vector<std::string>(state.raw_retrieved_hashes.begin(),
                                              state.raw_retrieved_hashes.end())},
                    {"cost", json::parse(state.cost.to_json())},
                    {"cassette_entries", state.cassette_entries},
                    {"logical_clock_ms", state.logical_clock_ms},
                    {"failure_reason", state.failure_reason}};
    io::write_file_atomic(path, j.dump(2) + "\n");
}

Checkpoint load_state(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError("run state: invalid JSON at " + path.string() + ": " + e.what());
    }
    Checkpoint out;
    const auto status = run_status_from_string(j.at("next_status").get<std::string>());
    if (!status) throw ParseError("run state: unknown next_status");
    out.next_status = *status;
    out.rounds_completed = j.at("rounds_completed").get<int>();
    out.prompt = prompt_from_json(j.at("prompt"));
    out.pending_questions = j.at("pending_questions").get<std::vector<std::string>>();
    for (const auto& d : j.at("decisions")) {
        SufficiencyDecision dec;
        dec.value = d.at("value").get<std::string>() == "Retrieval" ? gateways::Decision::Retrieval
                                                                    : gateways::Decision::Refine;
        dec.rationale = d.at("rationale").get<std::string>();
        out.decisions.push_back(std::move(dec));
    }
    out.events = events_from_json(j.at("events"));
    for (const auto& h : j.at("raw_retrieved_hashes")) {
        out.raw_retrieved_hashes.insert(h.get<std::string>());
    }
    out.cost = CostReport::from_json(j.at("cost").dump());
    out.cassette_entries = j.at("cassette_entries").get<std::size_t>();
    out.logical_clock_ms = j.value("logical_clock_ms", static_cast<std::int64_t>(0));
    out.failure_reason = j.at("failure_reason").get<std::string>();
    return out;
}

}  // namespace orig::pipeline
