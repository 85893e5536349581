// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>

#include "orig/gateways/hub.hpp"

namespace orig::pipeline {

// The five accounted pipeline stages. Retrieval issued inside the loop is
// attributed to QueryPlanning (the planned queries drive it); the sufficiency
// check is attributed to KnowledgeAccumulation.
enum class Stage {
    Bootstrap,
    QueryPlanning,
    KnowledgeAccumulation,
    FineGrainedRefine,
    PromptExtension,
};

inline constexpr std::array<Stage, 5> kStages = {
    Stage::Bootstrap, Stage::QueryPlanning, Stage::KnowledgeAccumulation,
    Stage::FineGrainedRefine, Stage::PromptExtension};

const char* stage_key(Stage s);    // machine name, e.g. "query_planning"
const char* stage_title(Stage s);  // table name, e.g. "Query Planning"

struct StageCost {
    std::int64_t retrieval_calls = 0;
    std::int64_t retrieval_ms = 0;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;

    bool operator==(const StageCost&) const = default;
};

struct CostReport {
    std::map<Stage, StageCost> stages;  // every stage always present
    std::int64_t text_retrievals = 0;
    std::int64_t image_retrievals = 0;
    std::int64_t loop_iterations = 0;

    CostReport();

    std::int64_t total_input_tokens() const;
    std::int64_t total_output_tokens() const;
    std::int64_t total_retrieval_calls() const;

    std::string to_json() const;
    static CostReport from_json(const std::string& content);

    // Fixed-width table; every number matches the JSON rendering.
    std::string render_table() const;

    bool operator==(const CostReport&) const = default;
};

// Accumulates gateway exchange stats into the stage set by the runner.
class CostTracker {
public:
    void set_stage(Stage stage);
    Stage stage() const;

    void on_exchange(const gateways::ExchangeStats& stats);

    CostReport report() const;
    void restore(const CostReport& report);

private:
    mutable std::mutex mu_;
    Stage stage_ = Stage::Bootstrap;
    CostReport report_;
};

}  // namespace orig::pipeline
