// SPDX-License-Identifier: Apache-2.0
#include "orig/cli/commands.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>
#include <thread>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"
#include "orig/figeval/correlations.hpp"
#include "orig/figeval/report.hpp"
#include "orig/pipeline/runner.hpp"
#include "orig/pipeline/state_io.hpp"

namespace orig::cli {

using nlohmann::json;

namespace {

pipeline::RunConfig build_config(const Invocation& inv) {
    pipeline::RunConfig cfg;
    if (!inv.config_path.empty()) cfg = pipeline::load_config(inv.config_path);
    if (!inv.policy_flag.empty()) cfg.policy = pipeline::parse_policy(inv.policy_flag);
    if (!inv.cassette_flag.empty()) pipeline::apply_cassette_flag(cfg, inv.cassette_flag);
    if (inv.skip_generation) cfg.skip_generation = true;
    if (inv.resume) cfg.resume = true;
    // --set overrides apply last and win
    for (const auto& assignment : inv.overrides) pipeline::apply_override(cfg, assignment);
    return cfg;
}

int exit_code_for(const pipeline::RunBundle& bundle) {
    return bundle.status == pipeline::RunStatus::Done ? kExitOk : kExitRunFailure;
}

void print_bundle_summary(const pipeline::RunBundle& bundle) {
    std::printf("status: %s\n", pipeline::to_string(bundle.status));
    if (!bundle.failure_reason.empty()) {
        std::printf("failure: %s\n", bundle.failure_reason.c_str());
    }
    std::printf("loop iterations (incl. bootstrap): %lld\n",
                static_cast<long long>(bundle.cost.loop_iterations));
    std::printf("knowledge: %zu texts, %zu images\n", bundle.kb.texts().size(),
                bundle.kb.images().size());
    if (bundle.enriched) {
        std::printf("enriched prompt: %s\n", bundle.enriched->prompt_text.c_str());
    }
    std::printf("run directory: %s\n", bundle.run_dir.string().c_str());
}

// Judge gateway for eval commands: backends per config, its own cassette.
pipeline::RunEnvironment make_judge_environment(pipeline::RunConfig cfg,
                                                const std::string& judge_cassette_flag,
                                                const std::filesystem::path& out_dir) {
    if (!judge_cassette_flag.empty()) pipeline::apply_cassette_flag(cfg, judge_cassette_flag);
    if (cfg.cassette_mode != gateways::CassetteMode::Passthrough && cfg.cassette_path.empty()) {
        cfg.cassette_path = (out_dir / "judge_cassette.jsonl").string();
    }
    return pipeline::make_environment(cfg, out_dir);
}

}  // namespace

void build_app(CLI::App& app, Invocation& inv) {
    app.require_subcommand(1);
    app.fallthrough(false);

    auto* run = app.add_subcommand("run", "Run the retrieval loop for one prompt");
    run->add_option("--config", inv.config_path, "Run config JSON file");
    run->add_option("--prompt", inv.prompt_text, "Prompt text")->required();
    run->add_option("--prompt-id", inv.prompt_id, "Prompt id (default: prompt)");
    run->add_option("--out", inv.out_dir, "Run directory")->required();
    run->add_option("--cassette", inv.cassette_flag, "record:<path> | replay:<path> | off");
    run->add_option("--policy", inv.policy_flag, "adaptive | fixed:<n>");
    run->add_flag("--skip-generation", inv.skip_generation, "Stop after prompt construction");
    run->add_flag("--resume", inv.resume, "Resume an interrupted run from its checkpoint");
    run->add_option("--set", inv.overrides, "Config override key=value (repeatable)");

    auto* batch = app.add_subcommand("batch", "Run every dataset prompt");
    batch->add_option("--config", inv.config_path, "Run config JSON file");
    batch->add_option("--dataset", inv.dataset_path, "Dataset JSON file")->required();
    batch->add_option("--out", inv.out_dir, "Output root (one run dir per prompt)")->required();
    batch->add_option("--cassette", inv.cassette_flag,
                      "record:<dir> | replay:<dir> | off (per-prompt <dir>/<id>.jsonl)");
    batch->add_option("--policy", inv.policy_flag, "adaptive | fixed:<n>");
    batch->add_flag("--skip-generation", inv.skip_generation, "Stop after prompt construction");
    batch->add_option("--workers", inv.workers, "Concurrent pipelines (default 4)");
    batch->add_option("--set", inv.overrides, "Config override key=value (repeatable)");

    auto* eval = app.add_subcommand("eval", "Score run bundles against a dataset");
    eval->add_option("--config", inv.config_path, "Judge config JSON file");
    eval->add_option("--dataset", inv.dataset_path, "Dataset JSON file")->required();
    eval->add_option("--runs", inv.runs_root, "Root directory of run bundles")->required();
    eval->add_option("--out", inv.out_dir, "Report output directory (default <runs>/report)");
    eval->add_option("--judge-cassette", inv.judge_cassette_flag,
                     "record:<path> | replay:<path> | off for the judge gateway");
    eval->add_option("--min-coverage", inv.min_coverage,
                     "Fail (exit 3) when covered/total falls below this ratio (default 1.0)");
    eval->add_option("--set", inv.overrides, "Config override key=value (repeatable)");

    auto* verify = app.add_subcommand("replay-verify",
                                      "Re-execute a run from its cassette and byte-compare outputs");
    verify->add_option("--run", inv.run_dir, "Run directory to verify")->required();

    auto* report = app.add_subcommand("report", "Render a report.json (optionally correlate two)");
    report->add_option("--report", inv.report_path, "report.json path")->required();
    report->add_option("--correlate", inv.correlate_with,
                       "Second report.json; prints Pearson/Spearman/Kendall over per-class means");

    for (auto* sub : {run, batch, eval, verify, report}) {
        sub->callback([&inv, sub]() { inv.command = sub->get_name(); });
    }
}

std::vector<std::string> documented_flags() {
    return {"--config",         "--prompt",   "--dataset",        "--out",
            "--cassette",       "--policy",   "--skip-generation", "--set",
            "--judge-cassette", "--runs",     "--run",            "--report",
            "--correlate",      "--min-coverage", "--workers",    "--resume",
            "--prompt-id"};
}

int cmd_run(const Invocation& inv) {
    const auto cfg = build_config(inv);
    knowledge::UserPrompt prompt;
    prompt.id = inv.prompt_id;
    prompt.text = inv.prompt_text;
    const auto bundle = pipeline::run_pipeline(cfg, inv.out_dir, prompt);
    print_bundle_summary(bundle);
    return exit_code_for(bundle);
}

int cmd_batch(const Invocation& inv) {
    const auto base_cfg = build_config(inv);
    const auto dataset = figeval::load_dataset(inv.dataset_path);
    if (dataset.prompts.empty()) throw PreconditionError("batch: no prompts in dataset");

    const std::filesystem::path out_root(inv.out_dir);
    io::ensure_dir(out_root);

    // One shared rate-limiter set across worker pipelines.
    auto wait_clock = std::make_shared<SteadyWaitClock>();
    auto limiters = std::make_shared<gateways::RateLimiterSet>(base_cfg.rate_limit_per_second,
                                                               wait_clock);

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    const int worker_count =
        std::max(1, std::min<int>(inv.workers, static_cast<int>(dataset.prompts.size())));

    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= dataset.prompts.size()) return;
            const auto& p = dataset.prompts[i];
            pipeline::RunConfig cfg = base_cfg;
            if (cfg.cassette_mode != gateways::CassetteMode::Passthrough) {
                // batch cassette paths are per-prompt files under the flag dir
                const std::filesystem::path dir =
                    cfg.cassette_path.empty() ? out_root / "cassettes"
                                              : std::filesystem::path(cfg.cassette_path);
                cfg.cassette_path = (dir / (p.id + ".jsonl")).string();
            }
            const auto run_dir = out_root / p.id;
            try {
                auto env = pipeline::make_environment(cfg, run_dir);
                env.wait_clock = wait_clock;
                env.limiters = limiters;
                pipeline::PipelineRunner runner(cfg, run_dir, std::move(env));
                knowledge::UserPrompt prompt;
                prompt.id = p.id;
                prompt.text = p.text;
                prompt.entity_class = p.entity_class;
                const auto bundle = runner.run(prompt);
                if (bundle.status != pipeline::RunStatus::Done) failures.fetch_add(1);
                spdlog::info("batch: {} -> {}", p.id, pipeline::to_string(bundle.status));
            } catch (const Error& e) {
                failures.fetch_add(1);
                spdlog::error("batch: {} -> error: {}", p.id, e.what());
            }
        }
    };
    std::vector<std::thread> threads;
    for (int i = 0; i < worker_count; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::printf("batch: %zu prompts, %d failed\n", dataset.prompts.size(), failures.load());
    return failures.load() == 0 ? kExitOk : kExitRunFailure;
}

int cmd_eval(const Invocation& inv) {
    pipeline::RunConfig cfg;
    if (!inv.config_path.empty()) cfg = pipeline::load_config(inv.config_path);
    for (const auto& assignment : inv.overrides) pipeline::apply_override(cfg, assignment);

    const auto dataset = figeval::load_dataset(inv.dataset_path);
    if (dataset.prompts.empty()) throw PreconditionError("eval: no prompts in dataset");

    const std::filesystem::path runs_root(inv.runs_root);
    const std::filesystem::path out_dir =
        inv.out_dir.empty() ? runs_root / "report" : std::filesystem::path(inv.out_dir);
    io::ensure_dir(out_dir);

    auto env = make_judge_environment(cfg, inv.judge_cassette_flag, out_dir);
    gateways::GatewayHubConfig hub_cfg;
    hub_cfg.retry_attempts = cfg.retry_attempts;
    hub_cfg.max_hits = cfg.max_hits;
    gateways::GatewayHub judge(hub_cfg, env.backends, env.cassette, env.time, env.limiters,
                               env.wait_clock);

    figeval::EvalOptions options;
    options.min_coverage = inv.min_coverage;
    options.digest_max_chars = static_cast<std::size_t>(cfg.digest_max_chars);
    const auto dataset_dir = std::filesystem::path(inv.dataset_path).parent_path();
    if (io::exists(dataset_dir / "blobs")) options.dataset_blobs_dir = dataset_dir / "blobs";

    const auto report = figeval::evaluate_run(dataset, runs_root, judge, options);
    io::write_file_atomic(out_dir / "report.json", report.to_json());
    io::write_file_atomic(out_dir / "report.txt", report.render());
    std::printf("%s", report.render().c_str());
    std::printf("report written to %s\n", (out_dir / "report.json").string().c_str());

    if (report.coverage() < inv.min_coverage) {
        std::fprintf(stderr, "coverage %.3f below threshold %.3f\n", report.coverage(),
                     inv.min_coverage);
        return kExitCoverage;
    }
    return kExitOk;
}

int cmd_replay_verify(const Invocation& inv) {
    const std::filesystem::path run_dir(inv.run_dir);
    const auto cassette_path = run_dir / "cassette.jsonl";
    const auto config_path = run_dir / "run_config.json";
    const auto state_path = run_dir / "state.json";
    for (const auto& p : {cassette_path, config_path, state_path}) {
        if (!io::exists(p)) throw PersistenceError("replay-verify: missing " + p.string());
    }

    auto cfg = pipeline::config_from_json(io::read_file(config_path));
    cfg.cassette_mode = gateways::CassetteMode::Replay;
    cfg.cassette_path = cassette_path.string();
    cfg.resume = false;

    const auto prompt = pipeline::load_state(state_path).prompt;

    const auto verify_dir = run_dir / "replay_verify_tmp";
    std::filesystem::remove_all(verify_dir);
    const auto bundle = pipeline::run_pipeline(cfg, verify_dir, prompt);

    int rc = kExitOk;
    if (bundle.status != pipeline::RunStatus::Done &&
        bundle.status != pipeline::RunStatus::Failed) {
        rc = kExitRunFailure;
    }
    if (bundle.status == pipeline::RunStatus::Failed) {
        std::fprintf(stderr, "replay-verify: replay run failed: %s\n",
                     bundle.failure_reason.c_str());
        rc = kExitRunFailure;
    } else {
        for (const char* rel : {"enriched_prompt.json", "kb/manifest.json", "cost_report.json"}) {
            const auto original = run_dir / rel;
            const auto replayed = verify_dir / rel;
            if (!io::exists(original) || !io::exists(replayed) ||
                io::read_file(original) != io::read_file(replayed)) {
                std::fprintf(stderr, "replay-verify: divergence in %s\n", rel);
                rc = kExitRunFailure;
                break;
            }
        }
    }
    std::filesystem::remove_all(verify_dir);
    if (rc == kExitOk) std::printf("replay-verify: %s is byte-identical under replay\n",
                                   run_dir.string().c_str());
    return rc;
}

int cmd_report(const Invocation& inv) {
    const auto content = io::read_file(inv.report_path);
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report: invalid JSON: ") + e.what());
    }

    const auto class_means = [](const json& report) {
        std::map<std::string, double> out;
        for (const auto& row : report.at("accuracy").at("by_class")) {
            const auto group = row.at("group").get<std::string>();
            if (group != "All") out[group] = row.at("mean_pct").get<double>();
        }
        return out;
    };

    // re-render the stored tables
    for (const char* section : {"by_class", "by_concept"}) {
        std::printf("Accuracy %s:\n", section);
        for (const auto& row : j.at("accuracy").at(section)) {
            std::printf("  %-16s %7.2f%%  (n=%d)\n", row.at("group").get<std::string>().c_str(),
                        row.at("mean_pct").get<double>(), row.at("support").get<int>());
        }
    }

    if (!inv.correlate_with.empty()) {
        const json other = json::parse(io::read_file(inv.correlate_with));
        const auto a = class_means(j);
        const auto b = class_means(other);
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& [group, mean] : a) {
            const auto it = b.find(group);
            if (it != b.end()) {
                x.push_back(mean);
                y.push_back(it->second);
            }
        }
        const auto r = figeval::correlations(x, y);
        std::printf("correlations over %zu shared class means:\n", x.size());
        std::printf("  pearson_r    %.6f\n  spearman_rho %.6f\n  kendall_tau  %.6f\n", r.pearson_r,
                    r.spearman_rho, r.kendall_tau);
    }
    return kExitOk;
}

int dispatch(const Invocation& inv) {
    if (inv.command == "run") return cmd_run(inv);
    if (inv.command == "batch") return cmd_batch(inv);
    if (inv.command == "eval") return cmd_eval(inv);
    if (inv.command == "replay-verify") return cmd_replay_verify(inv);
    if (inv.command == "report") return cmd_report(inv);
    throw PreconditionError("unknown command '" + inv.command + "'");
}

int run_main(int argc, char** argv) {
    CLI::App app{"orig: agentic open multimodal retrieval for factual image generation"};
    Invocation inv;
    build_app(app, inv);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }
    try {
        return dispatch(inv);
    } catch (const Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
        switch (e.kind()) {
            case ErrorKind::Gateway:
            case ErrorKind::Determinism:
                return kExitRunFailure;
            case ErrorKind::Coverage:
                return kExitCoverage;
            default:
                return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}

}  // namespace orig::cli
