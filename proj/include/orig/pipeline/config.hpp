// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orig/gateways/cassette.hpp"
#include "orig/gateways/live.hpp"

namespace orig::pipeline {

// Loop control: adaptive asks the sufficiency model each round; fixed runs
// exactly n loop rounds with no sufficiency calls.
struct IterationPolicy {
    enum class Kind { Adaptive, FixedRounds };
    Kind kind = Kind::Adaptive;
    int rounds = 0;

    static IterationPolicy adaptive() { return {Kind::Adaptive, 0}; }
    static IterationPolicy fixed(int n) { return {Kind::FixedRounds, n}; }
};

// Parses "adaptive" or "fixed:<n>"; throws ValidationError otherwise.
IterationPolicy parse_policy(const std::string& text);
std::string policy_to_string(const IterationPolicy& policy);

struct RunConfig {
    IterationPolicy policy = IterationPolicy::adaptive();
    int max_rounds = 3;
    int keep_pages = 2;
    int keep_images = 5;
    int digest_max_chars = 8000;
    bool skip_generation = false;

    gateways::CassetteMode cassette_mode = gateways::CassetteMode::Passthrough;
    std::string cassette_path;  // empty: <run_dir>/cassette.jsonl

    std::string backend = "live";  // live | stub
    int rate_limit_per_second = 5;
    int retry_attempts = 3;
    int max_hits = 10;
    bool resume = false;

    gateways::LiveConfig live;
};

RunConfig config_from_json(const std::string& content);
std::string config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

// Applies one "key=value" override; throws ValidationError for unknown keys
// or unparseable values. Known keys mirror the JSON schema (dotted for the
// live section, e.g. live.model_base_url).
void apply_override(RunConfig& config, const std::string& assignment);

// Parses a --cassette flag value: record:<path> | replay:<path> | off.
void apply_cassette_flag(RunConfig& config, const std::string& flag);

}  // namespace orig::pipeline
