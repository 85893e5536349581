// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace orig::gateways {

// Extracts the first well-formed JSON object or array from raw model output,
// tolerating surrounding prose. Throws ParseError (carrying the raw text)
// when nothing parses.
std::string extract_json_block(const std::string& raw);

struct QueryPlanPayload {
    std::vector<std::string> sub_questions;
    std::vector<std::string> text_queries;
    std::vector<std::string> image_queries;
};

struct KeepListPayload {
    std::vector<int> keep;  // 1-based candidate indices, deduplicated, order kept
};

struct RankingPayload {
    std::vector<int> ranking;  // 1-based indices, most relevant first
};

enum class Decision { Retrieval, Refine };

struct DecisionPayload {
    Decision decision = Decision::Refine;
    std::string rationale;
};

struct ContentRefinePayload {
    std::vector<std::string> textual_features;
    std::vector<int> keep_images;  // 1-based indices into the knowledge-base image list
};

struct VisualFeaturesPayload {
    std::vector<std::string> visual_features;
};

struct ExtendedPromptPayload {
    std::string prompt;
};

// Schema-checked parsers; each throws ParseError when no structured block is
// found and ValidationError (naming the field) on schema violations.
QueryPlanPayload parse_query_plan(const std::string& raw);
KeepListPayload parse_keep_list(const std::string& raw, int candidate_count);
RankingPayload parse_ranking(const std::string& raw, int candidate_count);
DecisionPayload parse_decision(const std::string& raw);
ContentRefinePayload parse_content_refine(const std::string& raw);
VisualFeaturesPayload parse_visual_features(const std::string& raw);
ExtendedPromptPayload parse_extended_prompt(const std::string& raw);

// Case- and prose-tolerant true/false verdict ("Answer: TRUE." -> true).
// Throws ParseError when neither token is found or both are present.
bool parse_verdict(const std::string& raw);

}  // namespace orig::gateways
