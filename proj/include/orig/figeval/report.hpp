// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orig/figeval/dataset.hpp"
#include "orig/figeval/judge.hpp"

namespace orig::figeval {

// Everything judged and derived for one prompt.
struct EvalRecord {
    std::string prompt_id;
    std::vector<EvalQuestion> questions;
    std::vector<Judgment> judgments;
    std::vector<knowledge::GroundTruthFeature> features;
    PromptScore score;
    std::optional<AlignmentScore> alignment;
};

struct EvalOptions {
    double min_coverage = 1.0;  // enforced by the CLI (exit 3 below threshold)
    std::string judge_id = "judge";
    std::size_t digest_max_chars = 8000;
    // Reference images for questions that need one (dataset blobs dir).
    std::filesystem::path dataset_blobs_dir;
};

struct EvalReport {
    int total_prompts = 0;
    std::vector<std::string> skipped;  // prompts without a usable run bundle
    std::vector<EvalRecord> records;

    ReportTable accuracy_by_class;    // ends with the All row
    ReportTable accuracy_by_concept;  // PF / CC / TC
    ReportTable alignment_by_class;   // ends with the All row

    // Run-level averages over covered prompts, Table-3 style.
    double avg_iters = 0.0;
    double avg_prompt_tokens = 0.0;
    double avg_images = 0.0;
    double avg_text_retrievals = 0.0;
    double avg_image_retrievals = 0.0;

    int audited_judgments = 0;

    double coverage() const {
        return total_prompts == 0
                   ? 0.0
                   : static_cast<double>(records.size()) / static_cast<double>(total_prompts);
    }

    std::optional<Rational> generation_accuracy() const;  // All row of accuracy_by_class
    std::optional<Rational> retrieval_accuracy() const;   // All row of alignment_by_class

    std::string to_json() const;
    std::string render() const;
};

// Runs QA judging and retrieval-alignment judging for every dataset prompt
// whose run directory under runs_root is complete; prompts without a bundle
// are listed as skipped and the coverage ratio is reported.
EvalReport evaluate_run(const Dataset& dataset, const std::filesystem::path& runs_root,
                        gateways::GatewayHub& judge, const EvalOptions& options);

}  // namespace orig::figeval
