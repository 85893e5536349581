// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace orig::cli {

// Exit codes, stable across commands: 0 success, 1 usage error, 2 run or
// determinism failure, 3 evaluation coverage below threshold.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRunFailure = 2;
inline constexpr int kExitCoverage = 3;

struct Invocation {
    std::string command;
    std::string config_path;
    std::string prompt_text;
    std::string prompt_id = "prompt";
    std::string dataset_path;
    std::string out_dir;
    std::string run_dir;
    std::string runs_root;
    std::string cassette_flag;        // record:<path> | replay:<path> | off
    std::string judge_cassette_flag;  // same syntax, for the eval judge
    std::string policy_flag;          // adaptive | fixed:<n>
    bool skip_generation = false;
    bool resume = false;
    std::vector<std::string> overrides;  // --set key=value
    std::string report_path;
    std::string correlate_with;
    double min_coverage = 1.0;
    int workers = 4;
};

// Wires subcommands and flags onto the app; the parsed invocation lands in
// `out`. Exposed separately so tests can introspect the flag surface.
void build_app(CLI::App& app, Invocation& out);

// Every flag the CLI documents, for the flag/doc parity check.
std::vector<std::string> documented_flags();

int cmd_run(const Invocation& inv);
int cmd_batch(const Invocation& inv);
int cmd_eval(const Invocation& inv);
int cmd_replay_verify(const Invocation& inv);
int cmd_report(const Invocation& inv);

int dispatch(const Invocation& inv);

// Full entry point: parse argv, dispatch, map errors to exit codes.
int run_main(int argc, char** argv);

}  // namespace orig::cli
