// SPDX-License-Identifier: Apache-2.0
#include "orig/pipeline/cost.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"

namespace orig::pipeline {

using nlohmann::json;

const char* stage_key(Stage s) {
    switch (s) {
        case Stage::Bootstrap: return "bootstrap";
        case Stage::QueryPlanning: return "query_planning";
        case Stage::KnowledgeAccumulation: return "knowledge_accumulation";
        case Stage::FineGrainedRefine: return "fine_grained_refine";
        case Stage::PromptExtension: return "prompt_extension";
    }
    return "unknown";
}

const char* stage_title(Stage s) {
    switch (s) {
        case Stage::Bootstrap: return "Bootstrap";
        case Stage::QueryPlanning: return "Query Planning";
        case Stage::KnowledgeAccumulation: return "Knowledge Accumulation";
        case Stage::FineGrainedRefine: return "Fine-grained Refine";
        case Stage::PromptExtension: return "Prompt Extension";
    }
    return "Unknown";
}

CostReport::CostReport() {
    for (const Stage s : kStages) stages[s] = StageCost{};
}

std::int64_t CostReport::total_input_tokens() const {
    std::int64_t n = 0;
    for (const auto& [s, c] : stages) n += c.input_tokens;
    return n;
}

std::int64_t CostReport::total_output_tokens() const {
    std::int64_t n = 0;
    for (const auto& [s, c] : stages) n += c.output_tokens;
    return n;
}

std::int64_t CostReport::total_retrieval_calls() const {
    std::int64_t n = 0;
    for (const auto& [s, c] : stages) n += c.retrieval_calls;
    return n;
}

std::string CostReport::to_json() const {
    json stage_obj = json::object();
    for (const Stage s : kStages) {
        const auto& c = stages.at(s);
        stage_obj[stage_key(s)] = {{"retrieval_calls", c.retrieval_calls},
                                   {"retrieval_seconds", static_cast<double>(c.retrieval_ms) / 1000.0},
                                   {"input_tokens", c.input_tokens},
                                   {"output_tokens", c.output_tokens}};
    }
    const json j = {{"stages", stage_obj},
                    {"totals",
                     {{"text_retrievals", text_retrievals},
                      {"image_retrievals", image_retrievals},
                      {"loop_iterations", loop_iterations},
                      {"retrieval_calls", total_retrieval_calls()},
                      {"input_tokens", total_input_tokens()},
                      {"output_tokens", total_output_tokens()}}},
                    {"token_accounting", "backend usage when reported, whitespace estimate otherwise"}};
    return j.dump(2) + "\n";
}

CostReport CostReport::from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("cost report: invalid JSON: ") + e.what());
    }
    CostReport out;
    const auto& stage_obj = j.at("stages");
    for (const Stage s : kStages) {
        const auto& c = stage_obj.at(stage_key(s));
        StageCost sc;
        sc.retrieval_calls = c.at("retrieval_calls").get<std::int64_t>();
        sc.retrieval_ms = std::llround(c.at("retrieval_seconds").get<double>() * 1000.0);
        sc.input_tokens = c.at("input_tokens").get<std::int64_t>();
        sc.output_tokens = c.at("output_tokens").get<std::int64_t>();
        out.stages[s] = sc;
    }
    const auto& totals = j.at("totals");
    out.text_retrievals = totals.at("text_retrievals").get<std::int64_t>();
    out.image_retrievals = totals.at("image_retrievals").get<std::int64_t>();
    out.loop_iterations = totals.at("loop_iterations").get<std::int64_t>();
    return out;
}

std::string CostReport::render_table() const {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-24s %16s %18s %14s %15s\n", "Stage", "Retrieval Calls",
                  "Retrieval Time (s)", "Input Tokens", "Output Tokens");
    out += line;
    out += std::string(91, '-') + "\n";
    for (const Stage s : kStages) {
        const auto& c = stages.at(s);
        std::snprintf(line, sizeof(line), "%-24s %16" PRId64 " %18.3f %14" PRId64 " %15" PRId64 "\n",
                      stage_title(s), c.retrieval_calls,
                      static_cast<double>(c.retrieval_ms) / 1000.0, c.input_tokens,
                      c.output_tokens);
        out += line;
    }
    out += std::string(91, '-') + "\n";
    std::snprintf(line, sizeof(line),
                  "Totals: text_retrievals=%" PRId64 " image_retrievals=%" PRId64
                  " loop_iterations=%" PRId64 " input_tokens=%" PRId64 " output_tokens=%" PRId64
                  "\n",
                  text_retrievals, image_retrievals, loop_iterations, total_input_tokens(),
                  total_output_tokens());
    out += line;
    return out;
}

void CostTracker::set_stage(Stage stage) {
    std::lock_guard lock(mu_);
    stage_ = stage;
}

Stage CostTracker::stage() const {
    std::lock_guard lock(mu_);
    return stage_;
}

void CostTracker::on_exchange(const gateways::ExchangeStats& stats) {
    std::lock_guard lock(mu_);
    auto& cost = report_.stages[stage_];
    if (stats.service == gateways::service::kModel) {
        cost.input_tokens += stats.tokens_in;
        cost.output_tokens += stats.tokens_out;
    } else if (stats.service == gateways::service::kTextSearch) {
        cost.retrieval_calls += 1;
        cost.retrieval_ms += stats.elapsed_ms;
        report_.text_retrievals += 1;
    } else if (stats.service == gateways::service::kImageSearch) {
        cost.retrieval_calls += 1;
        cost.retrieval_ms += stats.elapsed_ms;
        report_.image_retrievals += 1;
    } else if (stats.service == gateways::service::kPageReader ||
               stats.service == gateways::service::kImageFetch) {
        cost.retrieval_ms += stats.elapsed_ms;
    }
    // image_gen is the generation module, outside the five-stage accounting
}

CostReport CostTracker::report() const {
    std::lock_guard lock(mu_);
    return report_;
}

void CostTracker::restore(const CostReport& report) {
    std::lock_guard lock(mu_);
    report_ = report;
}

}  // namespace orig::pipeline
