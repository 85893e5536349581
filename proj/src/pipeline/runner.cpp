// SPDX-License-Identifier: Apache-2.0
#include "orig/pipeline/runner.hpp"

#include <spdlog/spdlog.h>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"
#include "orig/common/strings.hpp"
#include "orig/gateways/live.hpp"
#include "orig/gateways/scripted.hpp"
#include "orig/pipeline/state_io.hpp"

namespace orig::pipeline {

using gateways::Decision;
using gateways::InstructionRole;
using knowledge::ImageEvidence;
using knowledge::TextEvidence;

namespace {

// Bound on the per-candidate excerpt shown to the filtering model.
constexpr std::size_t kFilterExcerptChars = 800;

// Per-round bound from the retrieval protocol: one to five queries.
constexpr std::size_t kMaxQueriesPerRound = 5;

std::string render_bullets(const std::vector<std::string>& items) {
    if (items.empty()) return "(none)\n";
    std::string out;
    for (const auto& s : items) out += "- " + s + "\n";
    return out;
}

std::string render_text_candidates(const std::vector<TextEvidence>& texts) {
    std::string out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        out += "[" + std::to_string(i + 1) + "] (source: " + texts[i].source_url + ") " +
               strings::sanitize_utf8(texts[i].content.substr(0, kFilterExcerptChars)) + "\n";
    }
    return out;
}

std::string render_image_candidates(const std::vector<ImageEvidence>& images) {
    std::string out;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& im = images[i];
        out += "[" + std::to_string(i + 1) + "] Title: " + im.title + " | Url: " + im.source_url +
               " | Size: " + std::to_string(im.width) + "x" + std::to_string(im.height) + "\n";
    }
    return out;
}

std::string render_refined_images(const std::vector<ImageEvidence>& images) {
    if (images.empty()) return "(none)\n";
    std::string out;
    for (std::size_t i = 0; i < images.size(); ++i) {
        out += "[" + std::to_string(i + 1) + "] Title: " + images[i].title + " | Blob: " +
               images[i].content_hash + "\n";
    }
    return out;
}

}  // namespace

RunEnvironment make_environment(const RunConfig& config, const std::filesystem::path& run_dir) {
    RunEnvironment env;
    if (config.backend == "stub") {
        env.backends = gateways::make_stub_backends();
    } else {
        env.backends = gateways::make_live_backends(gateways::with_env_keys(config.live));
    }
    const std::filesystem::path cassette_path = config.cassette_path.empty()
                                                    ? run_dir / "cassette.jsonl"
                                                    : std::filesystem::path(config.cassette_path);
    if (config.cassette_mode == gateways::CassetteMode::Passthrough) {
        env.cassette = std::make_shared<gateways::Cassette>();
        env.time = std::make_shared<SystemTimeSource>();
    } else {
        env.cassette = std::make_shared<gateways::Cassette>(config.cassette_mode, cassette_path,
                                                            config.resume);
        env.time = std::make_shared<LogicalTimeSource>();
    }
    env.wait_clock = std::make_shared<SteadyWaitClock>();
    env.limiters =
        std::make_shared<gateways::RateLimiterSet>(config.rate_limit_per_second, env.wait_clock);
    return env;
}

PipelineRunner::PipelineRunner(RunConfig config, std::filesystem::path run_dir, RunEnvironment env)
    : config_(std::move(config)),
      run_dir_(std::move(run_dir)),
      blobs_(run_dir_ / "kb" / "blobs"),
      time_(env.time) {
    io::ensure_dir(run_dir_);
    gateways::GatewayHubConfig hub_cfg;
    hub_cfg.retry_attempts = config_.retry_attempts;
    hub_cfg.max_hits = config_.max_hits;
    hub_ = std::make_unique<gateways::GatewayHub>(hub_cfg, env.backends, env.cassette, env.time,
                                                  env.limiters, env.wait_clock);
    hub_->set_observer([this](const gateways::ExchangeStats& stats) { tracker_.on_exchange(stats); });
    bundle_.run_dir = run_dir_;
}

void PipelineRunner::add_event(const std::string& kind, const std::string& message, int round) {
    bundle_.events.push_back({kind, message, round});
}

gateways::WarningSink PipelineRunner::warn_sink(const std::string& kind, int round) {
    return [this, kind, round](const std::string& message) { add_event(kind, message, round); };
}

std::string PipelineRunner::knowledge_digest() const {
    return knowledge::kb_context_digest(bundle_.kb,
                                        static_cast<std::size_t>(config_.digest_max_chars));
}

void PipelineRunner::begin(const knowledge::UserPrompt& prompt) {
    knowledge::validate_prompt(prompt);
    bundle_.prompt = prompt;
    io::write_file_atomic(run_dir_ / "run_config.json", config_to_json(config_));
    bundle_.status = RunStatus::Bootstrapping;
    tracker_.set_stage(Stage::Bootstrap);
    bootstrap();
    bundle_.status = RunStatus::Looping;
}

RunBundle PipelineRunner::run(const knowledge::UserPrompt& prompt) {
    knowledge::validate_prompt(prompt);
    try {
        begin(prompt);
        checkpoint(RunStatus::Looping);
        run_loop();
        finish_from_refining();
    } catch (const Error& e) {
        fail(e);
    }
    finalize();
    return bundle_;
}

RunBundle PipelineRunner::resume() {
    const auto state_path = run_dir_ / "state.json";
    if (!io::exists(state_path)) {
        throw PersistenceError("nothing to resume: missing " + state_path.string());
    }
    const Checkpoint cp = load_state(state_path);
    bundle_.prompt = cp.prompt;
    bundle_.decisions = cp.decisions;
    bundle_.events = cp.events;
    bundle_.raw_retrieved_hashes = cp.raw_retrieved_hashes;
    bundle_.failure_reason.clear();
    pending_questions_ = cp.pending_questions;
    rounds_completed_ = cp.rounds_completed;
    tracker_.restore(cp.cost);
    if (io::exists(run_dir_ / "kb" / "manifest.json")) {
        bundle_.kb = knowledge::kb_load(run_dir_ / "kb");
    }
    if (hub_->mode() == gateways::CassetteMode::Record) {
        hub_->cassette().truncate_to(cp.cassette_entries);
    }
    if (cp.logical_clock_ms > 0) {
        if (auto* logical = dynamic_cast<LogicalTimeSource*>(time_.get())) {
            logical->set_next(cp.logical_clock_ms);
        }
    }
    spdlog::info("resuming run at stage '{}' (rounds completed: {})", to_string(cp.next_status),
                 cp.rounds_completed);
    try {
        switch (cp.next_status) {
            case RunStatus::Bootstrapping:
                return run(cp.prompt);
            case RunStatus::Looping:
                bundle_.status = RunStatus::Looping;
                run_loop();
                finish_from_refining();
                break;
            case RunStatus::Refining:
                finish_from_refining();
                break;
            case RunStatus::Generating: {
                auto enriched = enriched_prompt_from_json(
                    io::read_file(run_dir_ / "enriched_prompt.json"));
                // rebind image evidence from the kb by content hash
                std::vector<ImageEvidence> bound;
                for (const auto& stub : enriched.refined_images) {
                    for (const auto& im : bundle_.kb.images()) {
                        if (im.content_hash == stub.content_hash) {
                            bound.push_back(im);
                            break;
                        }
                    }
                }
                enriched.refined_images = std::move(bound);
                bundle_.enriched = std::move(enriched);
                bundle_.status = RunStatus::Generating;
                if (!config_.skip_generation) generate();
                bundle_.status = RunStatus::Done;
                checkpoint(RunStatus::Done);
                break;
            }
            case RunStatus::Done:
            case RunStatus::Failed:
                bundle_.status = cp.next_status;
                bundle_.failure_reason = cp.failure_reason;
                bundle_.cost = cp.cost;
                if (io::exists(run_dir_ / "enriched_prompt.json")) {
                    bundle_.enriched = enriched_prompt_from_json(
                        io::read_file(run_dir_ / "enriched_prompt.json"));
                }
                return bundle_;
        }
    } catch (const Error& e) {
        fail(e);
    }
    finalize();
    return bundle_;
}

void PipelineRunner::bootstrap() {
    std::vector<gateways::SearchHit> hits;
    try {
        hits = hub_->search_text(bundle_.prompt.text);
    } catch (const GatewayError& e) {
        add_event(event::kBootstrapEmpty, std::string("bootstrap search failed: ") + e.what(), 0);
    }
    if (hits.empty()) {
        if (!bundle_.has_event(event::kBootstrapEmpty)) {
            add_event(event::kBootstrapEmpty, "bootstrap search returned no hits", 0);
        }
        return;
    }
    const auto pages =
        rank_and_fetch_pages(*hub_, bundle_.prompt.text, hits, config_.keep_pages,
                             bundle_.prompt.text, warn_sink(event::kRetrievalWarning, 0));
    for (const auto& p : pages) bundle_.raw_retrieved_hashes.insert(p.content_hash);
    // Bootstrap evidence seeds the knowledge base unfiltered.
    bundle_.kb = knowledge::kb_merge(bundle_.kb, pages, {}, 0);
}

QueryPlan PipelineRunner::plan_round(int round) {
    const std::function<gateways::QueryPlanPayload(const std::string&)> parse =
        [](const std::string& raw) { return gateways::parse_query_plan(raw); };
    const auto payload = gateways::invoke_parsed<gateways::QueryPlanPayload>(
        *hub_, InstructionRole::QueryPlanning,
        {{"prompt", bundle_.prompt.text}, {"knowledge", knowledge_digest()}}, {}, parse,
        warn_sink(event::kReask, round));

    QueryPlan plan;
    plan.round = round;
    plan.sub_questions = payload.sub_questions;

    // empty strings are dropped before the query bound is applied
    const auto keep_nonempty = [&](const std::vector<std::string>& in,
                                   std::vector<std::string>& out) {
        for (const auto& q : in) {
            if (strings::trim(q).empty()) {
                add_event(event::kEmptyQueryDropped, "dropped empty query from plan", round);
            } else {
                out.push_back(q);
            }
        }
    };
    std::vector<std::string> text_queries;
    std::vector<std::string> image_queries;
    keep_nonempty(payload.text_queries, text_queries);
    keep_nonempty(payload.image_queries, image_queries);

    const std::size_t total = text_queries.size() + image_queries.size();
    if (total > kMaxQueriesPerRound) {
        add_event(event::kPlanTruncated,
                  "plan proposed " + std::to_string(total) + " queries, keeping first " +
                      std::to_string(kMaxQueriesPerRound) + " in listed order",
                  round);
        std::size_t budget = kMaxQueriesPerRound;
        if (text_queries.size() > budget) text_queries.resize(budget);
        budget -= text_queries.size();
        if (image_queries.size() > budget) image_queries.resize(budget);
    }
    plan.text_queries = std::move(text_queries);
    plan.image_queries = std::move(image_queries);

    for (const auto& q : plan.sub_questions) pending_questions_.push_back(q);
    return plan;
}

std::pair<std::vector<TextEvidence>, std::vector<ImageEvidence>> PipelineRunner::retrieve_round(
    const QueryPlan& plan) {
    if (plan.query_count() < 1) {
        throw PreconditionError("retrieve_round: plan has no queries");
    }
    std::vector<TextEvidence> texts;
    std::vector<ImageEvidence> images;
    for (const auto& q : plan.text_queries) {
        std::vector<gateways::SearchHit> hits;
        try {
            hits = hub_->search_text(q);
        } catch (const GatewayError& e) {
            add_event(event::kRetrievalWarning,
                      "text search failed, skipping query '" + q + "': " + e.what(), plan.round);
            continue;
        }
        auto pages = rank_and_fetch_pages(*hub_, bundle_.prompt.text, hits, config_.keep_pages, q,
                                          warn_sink(event::kRetrievalWarning, plan.round));
        for (auto& p : pages) texts.push_back(std::move(p));
    }
    for (const auto& q : plan.image_queries) {
        std::vector<gateways::SearchHit> hits;
        try {
            hits = hub_->search_images(q);
        } catch (const GatewayError& e) {
            add_event(event::kRetrievalWarning,
                      "image search failed, skipping query '" + q + "': " + e.what(), plan.round);
            continue;
        }
        auto selected = select_images(*hub_, blobs_, hits, config_.keep_images, q,
                                      warn_sink(event::kRetrievalWarning, plan.round));
        for (auto& im : selected) images.push_back(std::move(im));
    }
    for (const auto& t : texts) bundle_.raw_retrieved_hashes.insert(t.content_hash);
    for (const auto& im : images) bundle_.raw_retrieved_hashes.insert(im.content_hash);
    return {std::move(texts), std::move(images)};
}

void PipelineRunner::accumulate(const std::vector<TextEvidence>& raw_texts,
                                const std::vector<ImageEvidence>& raw_images, int round) {
    // Text filtering first; image filtering then sees the updated context.
    std::vector<TextEvidence> kept_texts;
    if (!raw_texts.empty()) {
        const int n = static_cast<int>(raw_texts.size());
        const std::function<gateways::KeepListPayload(const std::string&)> parse =
            [n](const std::string& raw) { return gateways::parse_keep_list(raw, n); };
        const auto keep = gateways::invoke_parsed<gateways::KeepListPayload>(
            *hub_, InstructionRole::TextFilter,
            {{"prompt", bundle_.prompt.text},
             {"knowledge", knowledge_digest()},
             {"candidates", render_text_candidates(raw_texts)}},
            {}, parse, warn_sink(event::kReask, round));
        for (const int idx : keep.keep) kept_texts.push_back(raw_texts[idx - 1]);
    }
    bundle_.kb = knowledge::kb_merge(bundle_.kb, kept_texts, {}, round);

    if (!raw_images.empty()) {
        const int n = static_cast<int>(raw_images.size());
        std::vector<gateways::AttachedImage> attachments;
        for (const auto& im : raw_images) {
            attachments.emplace_back(im.content_hash, blobs_.get(im.bytes_ref));
        }
        const std::function<gateways::KeepListPayload(const std::string&)> parse =
            [n](const std::string& raw) { return gateways::parse_keep_list(raw, n); };
        const auto keep = gateways::invoke_parsed<gateways::KeepListPayload>(
            *hub_, InstructionRole::ImageFilter,
            {{"prompt", bundle_.prompt.text},
             {"knowledge", knowledge_digest()},
             {"candidates", render_image_candidates(raw_images)}},
            attachments, parse, warn_sink(event::kReask, round));
        std::vector<ImageEvidence> kept_images;
        for (const int idx : keep.keep) kept_images.push_back(raw_images[idx - 1]);
        bundle_.kb = knowledge::kb_merge(bundle_.kb, {}, kept_images, round);
    }
}

SufficiencyDecision PipelineRunner::decide(int round) {
    if (round >= config_.max_rounds) {
        add_event(event::kRoundCap,
                  "round cap reached (max_rounds=" + std::to_string(config_.max_rounds) +
                      "), forcing Refine",
                  round);
        return {Decision::Refine, "round cap reached"};
    }
    if (config_.policy.kind == IterationPolicy::Kind::FixedRounds) {
        return {round < config_.policy.rounds ? Decision::Retrieval : Decision::Refine,
                "fixed-round policy (" + std::to_string(config_.policy.rounds) + ")"};
    }
    const std::function<gateways::DecisionPayload(const std::string&)> parse =
        [](const std::string& raw) { return gateways::parse_decision(raw); };
    try {
        const auto payload = gateways::invoke_parsed<gateways::DecisionPayload>(
            *hub_, InstructionRole::Sufficiency,
            {{"prompt", bundle_.prompt.text},
             {"knowledge", knowledge_digest()},
             {"questions", render_bullets(pending_questions_)}},
            {}, parse, warn_sink(event::kReask, round));
        return {payload.decision, payload.rationale};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Parse && e.kind() != ErrorKind::Validation) throw;
        add_event(event::kDecisionDefaulted,
                  std::string("sufficiency verdict unparseable, defaulting to Refine: ") + e.what(),
                  round);
        return {Decision::Refine, "defaulted after unparseable verdict"};
    }
}

void PipelineRunner::run_loop() {
    for (int round = rounds_completed_ + 1; round <= config_.max_rounds; ++round) {
        tracker_.set_stage(Stage::QueryPlanning);
        const QueryPlan plan = plan_round(round);
        if (plan.query_count() == 0) {
            add_event(event::kImplicitSufficiency,
                      "plan proposed no queries; treating knowledge as sufficient", round);
            break;
        }
        const auto [raw_texts, raw_images] = retrieve_round(plan);
        tracker_.set_stage(Stage::KnowledgeAccumulation);
        accumulate(raw_texts, raw_images, round);
        const SufficiencyDecision decision = decide(round);
        bundle_.decisions.push_back(decision);
        rounds_completed_ = round;
        if (decision.value == Decision::Refine) break;
        checkpoint(RunStatus::Looping);
    }
    bundle_.status = RunStatus::Refining;
    checkpoint(RunStatus::Refining);
}

EnrichedPrompt PipelineRunner::refine_and_extend() {
    tracker_.set_stage(Stage::FineGrainedRefine);
    const int image_count = static_cast<int>(bundle_.kb.images().size());
    const std::function<gateways::ContentRefinePayload(const std::string&)> parse_refine =
        [image_count](const std::string& raw) {
            auto payload = gateways::parse_content_refine(raw);
            for (const int idx : payload.keep_images) {
                if (idx < 1 || idx > image_count) {
                    throw ValidationError("keep_images index " + std::to_string(idx) +
                                          " out of range (knowledge base has " +
                                          std::to_string(image_count) + " images)");
                }
            }
            return payload;
        };
    const auto refined = gateways::invoke_parsed<gateways::ContentRefinePayload>(
        *hub_, InstructionRole::ContentRefine,
        {{"prompt", bundle_.prompt.text}, {"knowledge", knowledge_digest()}}, {}, parse_refine,
        warn_sink(event::kReask, rounds_completed_));

    EnrichedPrompt out;
    out.source_prompt_id = bundle_.prompt.id;
    out.textual_features = refined.textual_features;
    for (const int idx : refined.keep_images) {
        out.refined_images.push_back(bundle_.kb.images()[static_cast<std::size_t>(idx - 1)]);
    }

    std::vector<gateways::AttachedImage> attachments;
    for (const auto& im : out.refined_images) {
        attachments.emplace_back(im.content_hash, blobs_.get(im.bytes_ref));
    }

    if (!out.refined_images.empty()) {
        const std::function<gateways::VisualFeaturesPayload(const std::string&)> parse_visual =
            [](const std::string& raw) { return gateways::parse_visual_features(raw); };
        out.visual_features =
            gateways::invoke_parsed<gateways::VisualFeaturesPayload>(
                *hub_, InstructionRole::VisualRefine,
                {{"prompt", bundle_.prompt.text},
                 {"textual_features", render_bullets(out.textual_features)},
                 {"images", render_refined_images(out.refined_images)}},
                attachments, parse_visual, warn_sink(event::kReask, rounds_completed_))
                .visual_features;
    }

    tracker_.set_stage(Stage::PromptExtension);
    const std::function<gateways::ExtendedPromptPayload(const std::string&)> parse_ext =
        [](const std::string& raw) { return gateways::parse_extended_prompt(raw); };
    out.prompt_text = gateways::invoke_parsed<gateways::ExtendedPromptPayload>(
                          *hub_, InstructionRole::PromptExtend,
                          {{"prompt", bundle_.prompt.text},
                           {"textual_features", render_bullets(out.textual_features)},
                           {"visual_features", render_bullets(out.visual_features)},
                           {"images", render_refined_images(out.refined_images)}},
                          attachments, parse_ext, warn_sink(event::kReask, rounds_completed_))
                          .prompt;
    return out;
}

void PipelineRunner::generate() {
    std::vector<gateways::AttachedImage> refs;
    for (const auto& im : bundle_.enriched->refined_images) {
        refs.emplace_back(im.content_hash, blobs_.get(im.bytes_ref));
    }
    bundle_.artifact =
        gateways::generate_artifact(*hub_, bundle_.enriched->prompt_text, refs, run_dir_);
}

void PipelineRunner::finish_from_refining() {
    bundle_.status = RunStatus::Refining;
    bundle_.enriched = refine_and_extend();
    io::write_file_atomic(run_dir_ / "enriched_prompt.json",
                          enriched_prompt_json(*bundle_.enriched));
    bundle_.status = RunStatus::Generating;
    checkpoint(RunStatus::Generating);
    if (!config_.skip_generation) {
        try {
            generate();
        } catch (const GatewayError& e) {
            add_event(event::kGenerationFailed, e.what(), rounds_completed_);
            throw;
        }
    }
    bundle_.status = RunStatus::Done;
    checkpoint(RunStatus::Done);
}

void PipelineRunner::checkpoint(RunStatus next_status) {
    knowledge::kb_save(bundle_.kb, run_dir_ / "kb");
    Checkpoint cp;
    cp.next_status = next_status;
    cp.rounds_completed = rounds_completed_;
    cp.prompt = bundle_.prompt;
    cp.pending_questions = pending_questions_;
    cp.decisions = bundle_.decisions;
    cp.events = bundle_.events;
    cp.raw_retrieved_hashes = bundle_.raw_retrieved_hashes;
    cp.cost = tracker_.report();
    cp.cost.loop_iterations = 1 + static_cast<std::int64_t>(bundle_.decisions.size());
    cp.cassette_entries = hub_->cassette().entry_count();
    if (auto* logical = dynamic_cast<LogicalTimeSource*>(time_.get())) {
        cp.logical_clock_ms = logical->peek_ms();
    }
    cp.failure_reason = bundle_.failure_reason;
    save_state(cp, run_dir_ / "state.json");
    last_checkpoint_ = std::move(cp);
}

void PipelineRunner::fail(const Error& e) {
    bundle_.status = RunStatus::Failed;
    bundle_.failure_reason = std::string(to_string(e.kind())) + ": " + e.what();
    spdlog::error("run failed: {}", bundle_.failure_reason);
}

void PipelineRunner::finalize() {
    bundle_.cost = tracker_.report();
    bundle_.cost.loop_iterations = 1 + static_cast<std::int64_t>(bundle_.decisions.size());
    knowledge::kb_save(bundle_.kb, run_dir_ / "kb");
    io::write_file_atomic(run_dir_ / "cost_report.json", bundle_.cost.to_json());
    io::write_file_atomic(run_dir_ / "events.json", events_json(bundle_.events));
    if (bundle_.status == RunStatus::Failed) {
        // Keep the last good boundary (and its cassette entry count) so the
        // run can be resumed; only the failure reason and events are updated.
        Checkpoint cp = last_checkpoint_.value_or(Checkpoint{});
        if (!last_checkpoint_) cp.prompt = bundle_.prompt;
        cp.events = bundle_.events;
        cp.failure_reason = bundle_.failure_reason;
        save_state(cp, run_dir_ / "state.json");
    } else {
        checkpoint(bundle_.status);
    }
}

RunBundle run_pipeline(const RunConfig& config, const std::filesystem::path& run_dir,
                       const knowledge::UserPrompt& prompt) {
    PipelineRunner runner(config, run_dir, make_environment(config, run_dir));
    if (config.resume && io::exists(run_dir / "state.json")) {
        return runner.resume();
    }
    return runner.run(prompt);
}

}  // namespace orig::pipeline
