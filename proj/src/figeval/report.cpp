// SPDX-License-Identifier: Apache-2.0
#include "orig/figeval/report.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"
#include "orig/common/strings.hpp"
#include "orig/knowledge/blob_store.hpp"
#include "orig/pipeline/cost.hpp"
#include "orig/pipeline/state_io.hpp"

namespace orig::figeval {

using nlohmann::json;

namespace {

json table_to_json(const ReportTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"group", r.group},
                        {"mean_pct", r.mean.pct()},
                        {"num", r.mean.num},
                        {"den", r.mean.den},
                        {"support", r.support}});
    }
    return rows;
}

std::string render_table(const std::string& heading, const ReportTable& table) {
    std::string out = heading + "\n";
    char line[128];
    for (const auto& r : table.rows) {
        std::snprintf(line, sizeof(line), "  %-16s %7.2f%%  (n=%d)\n", r.group.c_str(),
                      r.mean.pct(), r.support);
        out += line;
    }
    return out;
}

// The generated image bytes for a run: the artifact file named by the
// generation manifest.
std::optional<std::string> load_artifact_bytes(const std::filesystem::path& run_dir) {
    const auto manifest_path = run_dir / "artifact" / "manifest.json";
    if (!io::exists(manifest_path)) return std::nullopt;
    try {
        const json manifest = json::parse(io::read_file(manifest_path));
        const auto file = manifest.at("artifact_file").get<std::string>();
        return io::read_file(run_dir / "artifact" / file);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

std::optional<Rational> EvalReport::generation_accuracy() const {
    for (const auto& r : accuracy_by_class.rows) {
        if (r.group == "All") return r.mean;
    }
    return std::nullopt;
}

std::optional<Rational> EvalReport::retrieval_accuracy() const {
    for (const auto& r : alignment_by_class.rows) {
        if (r.group == "All") return r.mean;
    }
    return std::nullopt;
}

EvalReport evaluate_run(const Dataset& dataset, const std::filesystem::path& runs_root,
                        gateways::GatewayHub& judge, const EvalOptions& options) {
    if (dataset.prompts.empty()) throw PreconditionError("evaluate_run: no prompts in dataset");

    EvalReport report;
    report.total_prompts = static_cast<int>(dataset.prompts.size());

    const auto classes = dataset.class_index();
    std::vector<PromptScore> scores;
    std::vector<PromptScore> alignment_as_scores;  // reuse the macro machinery

    double sum_iters = 0.0;
    double sum_tokens = 0.0;
    double sum_images = 0.0;
    double sum_text_retrievals = 0.0;
    double sum_image_retrievals = 0.0;

    std::optional<knowledge::BlobStore> reference_blobs;
    if (!options.dataset_blobs_dir.empty()) {
        reference_blobs.emplace(options.dataset_blobs_dir);
    }

    for (const auto& prompt : dataset.prompts) {
        const auto run_dir = runs_root / prompt.id;
        const auto image_bytes = load_artifact_bytes(run_dir);
        if (!image_bytes || !io::exists(run_dir / "kb" / "manifest.json")) {
            report.skipped.push_back(prompt.id);
            spdlog::warn("eval: skipping prompt {} (incomplete run bundle)", prompt.id);
            continue;
        }

        EvalRecord record;
        record.prompt_id = prompt.id;
        record.questions = dataset.questions_of(prompt.id);
        record.features = dataset.features_of(prompt.id);
        if (record.questions.empty()) {
            report.skipped.push_back(prompt.id);
            spdlog::warn("eval: skipping prompt {} (no questions)", prompt.id);
            continue;
        }

        for (const auto& q : record.questions) {
            std::optional<std::string> reference;
            if (q.needs_reference_image) {
                if (!reference_blobs || !q.reference_blob) {
                    throw PreconditionError("evaluate_run: question " + q.id +
                                            " needs a reference image but no dataset blob store "
                                            "was provided");
                }
                reference = reference_blobs->get(*q.reference_blob);
            }
            record.judgments.push_back(
                judge_question(q, *image_bytes, reference, judge, options.judge_id));
            if (record.judgments.back().audit_flag) ++report.audited_judgments;
        }
        record.score = score_prompt(record.judgments, record.questions);
        scores.push_back(record.score);

        const auto kb = knowledge::kb_load(run_dir / "kb");
        if (!record.features.empty()) {
            record.alignment = alignment_score(prompt.id, record.features, kb, judge,
                                               options.digest_max_chars);
            PromptScore as;
            as.prompt_id = prompt.id;
            as.s = record.alignment->a;
            as.m = record.alignment->n;
            alignment_as_scores.push_back(std::move(as));
        }

        // run-level summary numbers
        const auto cost = pipeline::CostReport::from_json(
            io::read_file(run_dir / "cost_report.json"));
        sum_iters += static_cast<double>(cost.loop_iterations);
        sum_text_retrievals += static_cast<double>(cost.text_retrievals);
        sum_image_retrievals += static_cast<double>(cost.image_retrievals);
        const auto enriched = pipeline::enriched_prompt_from_json(
            io::read_file(run_dir / "enriched_prompt.json"));
        sum_tokens += static_cast<double>(strings::approx_token_count(enriched.prompt_text));
        sum_images += static_cast<double>(enriched.refined_images.size());

        report.records.push_back(std::move(record));
    }

    const auto covered = static_cast<double>(report.records.size());
    if (covered > 0) {
        report.avg_iters = sum_iters / covered;
        report.avg_prompt_tokens = sum_tokens / covered;
        report.avg_images = sum_images / covered;
        report.avg_text_retrievals = sum_text_retrievals / covered;
        report.avg_image_retrievals = sum_image_retrievals / covered;
        report.accuracy_by_class = macro_average(scores, classes, Grouping::EntityClass);
        report.accuracy_by_concept = macro_average(scores, classes, Grouping::Concept);
        if (!alignment_as_scores.empty()) {
            report.alignment_by_class =
                macro_average(alignment_as_scores, classes, Grouping::EntityClass);
        }
    }
    return report;
}

std::string EvalReport::to_json() const {
    json prompts = json::array();
    for (const auto& r : records) {
        json judgments = json::array();
        for (const auto& jd : r.judgments) {
            judgments.push_back({{"question_id", jd.question_id},
                                 {"value", jd.value},
                                 {"judge_id", jd.judge_id},
                                 {"audit_flag", jd.audit_flag}});
        }
        json concepts = json::object();
        for (const auto& [tag, ratio] : r.score.per_concept) {
            concepts[knowledge::to_string(tag)] = {{"mean_pct", ratio.pct()},
                                                   {"num", ratio.num},
                                                   {"den", ratio.den}};
        }
        json node = {{"prompt_id", r.prompt_id},
                     {"questions", r.questions.size()},
                     {"score_pct", r.score.s.pct()},
                     {"score_num", r.score.s.num},
                     {"score_den", r.score.s.den},
                     {"concepts", concepts},
                     {"judgments", judgments}};
        if (r.alignment) {
            node["alignment_pct"] = r.alignment->a.pct();
            node["alignment_num"] = r.alignment->a.num;
            node["alignment_den"] = r.alignment->a.den;
        }
        prompts.push_back(std::move(node));
    }

    json j = {{"coverage",
               {{"covered", records.size()},
                {"total", total_prompts},
                {"ratio", coverage()},
                {"skipped", skipped}}},
              {"accuracy",
               {{"by_class", table_to_json(accuracy_by_class)},
                {"by_concept", table_to_json(accuracy_by_concept)}}},
              {"alignment", {{"by_class", table_to_json(alignment_by_class)}}},
              {"generation",
               {{"avg_iters", avg_iters},
                {"avg_prompt_tokens", avg_prompt_tokens},
                {"avg_images", avg_images},
                {"avg_text_retrievals", avg_text_retrievals},
                {"avg_image_retrievals", avg_image_retrievals}}},
              {"audited_judgments", audited_judgments},
              {"prompts", prompts}};
    if (const auto g = generation_accuracy()) j["generation"]["g_acc_pct"] = g->pct();
    if (const auto r = retrieval_accuracy()) j["generation"]["r_acc_pct"] = r->pct();
    return j.dump(2) + "\n";
}

std::string EvalReport::render() const {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "Coverage: %zu/%d prompts (%.1f%%), %d audited judgments\n",
                  records.size(), total_prompts, coverage() * 100.0, audited_judgments);
    out += line;
    if (!skipped.empty()) {
        out += "Skipped:";
        for (const auto& id : skipped) out += " " + id;
        out += "\n";
    }
    out += "\n" + render_table("Accuracy by entity class", accuracy_by_class);
    out += "\n" + render_table("Accuracy by concept", accuracy_by_concept);
    if (!alignment_by_class.rows.empty()) {
        out += "\n" + render_table("Retrieval alignment by entity class", alignment_by_class);
    }
    const auto g = generation_accuracy();
    const auto r = retrieval_accuracy();
    std::snprintf(line, sizeof(line),
                  "\nRun summary: Iters %.2f | R.Acc %s | Tokens %.1f | Images %.2f | G.Acc %s\n",
                  avg_iters,
                  r ? (std::to_string(r->pct()).substr(0, 5) + "%").c_str() : "n/a",
                  avg_prompt_tokens, avg_images,
                  g ? (std::to_string(g->pct()).substr(0, 5) + "%").c_str() : "n/a");
    out += line;
    return out;
}

}  // namespace orig::figeval
