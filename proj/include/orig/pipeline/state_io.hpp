// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "orig/pipeline/types.hpp"

namespace orig::pipeline {

// Stage-boundary checkpoint persisted as <run>/state.json; enough to resume
// an interrupted run without repeating completed stages.
struct Checkpoint {
    RunStatus next_status = RunStatus::Bootstrapping;
    int rounds_completed = 0;
    knowledge::UserPrompt prompt;
    std::vector<std::string> pending_questions;
    std::vector<SufficiencyDecision> decisions;
    std::vector<RunEvent> events;
    std::set<std::string> raw_retrieved_hashes;
    CostReport cost;
    std::size_t cassette_entries = 0;
    // Position of the logical timestamp source at the boundary, so resumed
    // runs reproduce the timestamps an uninterrupted run would have written.
    std::int64_t logical_clock_ms = 0;
    std::string failure_reason;
};

void save_state(const Checkpoint& state, const std::filesystem::path& path);
Checkpoint load_state(const std::filesystem::path& path);

std::string events_json(const std::vector<RunEvent>& events);

}  // namespace orig::pipeline
