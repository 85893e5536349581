// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "orig/pipeline/config.hpp"
#include "orig/pipeline/state_io.hpp"
#include "orig/pipeline/types.hpp"

namespace orig::pipeline {

struct RunEnvironment {
    gateways::BackendSet backends;
    std::shared_ptr<gateways::Cassette> cassette;
    std::shared_ptr<TimeSource> time;
    std::shared_ptr<gateways::RateLimiterSet> limiters;
    std::shared_ptr<WaitClock> wait_clock;
};

// Builds the default environment for a run directory: stub or live backends,
// cassette per config, logical timestamps whenever a cassette is in play.
RunEnvironment make_environment(const RunConfig& config, const std::filesystem::path& run_dir);

// Drives one prompt through bootstrap, the retrieval loop, prompt
// construction and generation, persisting the run directory as it goes.
class PipelineRunner {
public:
    PipelineRunner(RunConfig config, std::filesystem::path run_dir, RunEnvironment env);

    RunBundle run(const knowledge::UserPrompt& prompt);

    // Continues an interrupted run from its last stage boundary.
    RunBundle resume();

    // Stage operations, exposed for focused tests. begin() validates the
    // prompt and executes the bootstrap stage.
    void begin(const knowledge::UserPrompt& prompt);
    QueryPlan plan_round(int round);
    std::pair<std::vector<knowledge::TextEvidence>, std::vector<knowledge::ImageEvidence>>
    retrieve_round(const QueryPlan& plan);
    void accumulate(const std::vector<knowledge::TextEvidence>& raw_texts,
                    const std::vector<knowledge::ImageEvidence>& raw_images, int round);
    SufficiencyDecision decide(int round);
    EnrichedPrompt refine_and_extend();

    const RunBundle& bundle() const { return bundle_; }
    gateways::GatewayHub& hub() { return *hub_; }
    knowledge::BlobStore& blobs() { return blobs_; }

private:
    void bootstrap();
    void run_loop();
    void finish_from_refining();
    void generate();
    void checkpoint(RunStatus next_status);
    void finalize();
    void fail(const Error& e);
    void add_event(const std::string& kind, const std::string& message, int round = -1);
    gateways::WarningSink warn_sink(const std::string& kind, int round);
    std::string knowledge_digest() const;

    RunConfig config_;
    std::filesystem::path run_dir_;
    knowledge::BlobStore blobs_;
    std::shared_ptr<TimeSource> time_;
    std::unique_ptr<gateways::GatewayHub> hub_;
    CostTracker tracker_;
    RunBundle bundle_;
    std::vector<std::string> pending_questions_;
    int rounds_completed_ = 0;
    std::optional<Checkpoint> last_checkpoint_;
};

// Convenience wrapper: environment + runner + run in one call.
RunBundle run_pipeline(const RunConfig& config, const std::filesystem::path& run_dir,
                       const knowledge::UserPrompt& prompt);

}  // namespace orig::pipeline
