// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orig/gateways/retrieval_ops.hpp"
#include "orig/gateways/structured.hpp"
#include "orig/knowledge/knowledge_base.hpp"
#include "orig/pipeline/cost.hpp"

namespace orig::pipeline {

struct QueryPlan {
    std::vector<std::string> sub_questions;
    std::vector<std::string> text_queries;
    std::vector<std::string> image_queries;
    int round = 0;

    std::size_t query_count() const { return text_queries.size() + image_queries.size(); }
};

struct SufficiencyDecision {
    gateways::Decision value = gateways::Decision::Refine;
    std::string rationale;
};

struct EnrichedPrompt {
    std::string prompt_text;
    std::vector<std::string> textual_features;
    std::vector<std::string> visual_features;
    std::vector<knowledge::ImageEvidence> refined_images;
    std::string source_prompt_id;
};

std::string enriched_prompt_json(const EnrichedPrompt& enriched);
EnrichedPrompt enriched_prompt_from_json(const std::string& content);

enum class RunStatus { Bootstrapping, Looping, Refining, Generating, Done, Failed };

const char* to_string(RunStatus status);
std::optional<RunStatus> run_status_from_string(const std::string& s);

struct RunEvent {
    std::string kind;
    std::string message;
    int round = -1;
};

namespace event {
inline constexpr const char* kRetrievalWarning = "retrieval_warning";
inline constexpr const char* kBootstrapEmpty = "bootstrap_empty";
inline constexpr const char* kPlanTruncated = "plan_truncated";
inline constexpr const char* kEmptyQueryDropped = "empty_query_dropped";
inline constexpr const char* kImplicitSufficiency = "implicit_sufficiency";
inline constexpr const char* kRoundCap = "round_cap";
inline constexpr const char* kReask = "reask";
inline constexpr const char* kDecisionDefaulted = "decision_defaulted";
inline constexpr const char* kGenerationFailed = "generation_failed";
}  // namespace event

struct RunBundle {
    RunStatus status = RunStatus::Bootstrapping;
    knowledge::UserPrompt prompt;
    knowledge::KnowledgeBase kb;
    std::optional<EnrichedPrompt> enriched;
    std::optional<gateways::GenerationArtifact> artifact;
    CostReport cost;
    std::vector<SufficiencyDecision> decisions;
    std::vector<RunEvent> events;
    // Content hashes of every raw retrieval result of this run, before any
    // filtering; supports the filtering-is-selection audit.
    std::set<std::string> raw_retrieved_hashes;
    std::string failure_reason;
    std::filesystem::path run_dir;

    bool has_event(const std::string& kind) const;
};

}  // namespace orig::pipeline
