// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "orig/common/hashing.hpp"
#include "orig/common/io.hpp"
#include "orig/figeval/report.hpp"
#include "orig/pipeline/state_io.hpp"
#include "support/fixtures.hpp"

using namespace orig;
using namespace orig::figeval;
using gateways::InstructionRole;
using knowledge::ConceptTag;
using knowledge::EntityClass;
using testsupport::fresh_temp_dir;

namespace {

struct EvalHarness {
    testsupport::ScriptedSet scripted = testsupport::make_scripted_set();
    std::shared_ptr<gateways::Cassette> cassette = std::make_shared<gateways::Cassette>();
    std::shared_ptr<TimeSource> time = std::make_shared<LogicalTimeSource>();
    std::shared_ptr<VirtualWaitClock> wait = std::make_shared<VirtualWaitClock>();
    std::shared_ptr<gateways::RateLimiterSet> limiters =
        std::make_shared<gateways::RateLimiterSet>(1000, wait);

    gateways::GatewayHub make() {
        return gateways::GatewayHub({}, scripted.as_backends(), cassette, time, limiters, wait);
    }
};

// Writes a complete-enough run bundle for evaluation: kb, enriched prompt,
// cost report and a generation artifact.
void write_run_dir(const std::filesystem::path& dir, const std::string& prompt_id,
                   int loop_iterations, const std::string& enriched_text) {
    knowledge::KnowledgeBase kb;
    const auto t = knowledge::make_text_evidence("evidence for " + prompt_id, "https://e.org/x",
                                                 "snip", "2020-01-01T00:00:00Z", "q");
    kb = knowledge::kb_merge(kb, {t}, {}, 0);
    knowledge::kb_save(kb, dir / "kb");

    pipeline::EnrichedPrompt enriched;
    enriched.prompt_text = enriched_text;
    enriched.textual_features = {"f1"};
    enriched.source_prompt_id = prompt_id;
    io::write_file_atomic(dir / "enriched_prompt.json", pipeline::enriched_prompt_json(enriched));

    pipeline::CostReport cost;
    cost.loop_iterations = loop_iterations;
    cost.text_retrievals = 2;
    cost.image_retrievals = 1;
    io::write_file_atomic(dir / "cost_report.json", cost.to_json());

    const std::string image = gateways::make_probe_png(16, 16, 77);
    io::write_file_atomic(dir / "artifact" / "output.png", image);
    const nlohmann::json manifest = {{"prompt_sha256", hashing::sha256_hex(enriched_text)},
                                     {"reference_hashes", nlohmann::json::array()},
                                     {"response_sha256", hashing::sha256_hex(image)},
                                     {"response_bytes", image.size()},
                                     {"artifact_file", "output.png"}};
    io::write_file_atomic(dir / "artifact" / "manifest.json", manifest.dump(2) + "\n");
}

Dataset make_dataset(const std::filesystem::path& blobs_dir) {
    Dataset ds;
    ds.prompts.push_back({"p1", "an animal prompt", EntityClass::Animal});
    ds.prompts.push_back({"p2", "a food prompt", EntityClass::Food});
    ds.prompts.push_back({"p3", "another food prompt", EntityClass::Food});

    const auto q = [](const std::string& id, const std::string& prompt_id, ConceptTag tag) {
        EvalQuestion out;
        out.id = id;
        out.prompt_id = prompt_id;
        out.statement = "statement " + id;
        out.concept_tag = tag;
        return out;
    };
    ds.questions.push_back(q("p1-q1", "p1", ConceptTag::PF));
    ds.questions.push_back(q("p1-q2", "p1", ConceptTag::PF));
    ds.questions.push_back(q("p2-q1", "p2", ConceptTag::CC));
    auto ref_q = q("p2-q2", "p2", ConceptTag::TC);
    ref_q.needs_reference_image = true;
    knowledge::BlobStore blobs(blobs_dir);
    ref_q.reference_blob = blobs.put(gateways::make_probe_png(8, 8, 123));
    ds.questions.push_back(ref_q);
    ds.questions.push_back(q("p3-q1", "p3", ConceptTag::PF));

    ds.features.push_back({"p1", {"p1-f1", "animal fact", ConceptTag::PF}});
    ds.features.push_back({"p2", {"p2-f1", "food fact one", ConceptTag::CC}});
    ds.features.push_back({"p2", {"p2-f2", "food fact two", ConceptTag::CC}});
    return ds;
}

}  // namespace

TEST_CASE("evaluate_run composes scores, alignment, coverage and summaries") {
    const auto root = fresh_temp_dir("eval");
    const auto runs = root / "runs";
    write_run_dir(runs / "p1", "p1", 2, "one two three four");
    write_run_dir(runs / "p2", "p2", 3, "five six");
    // p3 intentionally has no run bundle

    const auto ds = make_dataset(root / "blobs");

    const auto run_eval = [&]() {
        EvalHarness h;
        // QA verdicts in dataset order: p1 {T, F}, p2 {T, T}
        for (const char* v : {"True", "False", "True", "True"}) {
            h.scripted.model->enqueue(InstructionRole::QaJudge, v);
        }
        // alignment: p1 {T}, p2 {T, F}
        for (const char* v : {"True", "True", "False"}) {
            h.scripted.model->enqueue(InstructionRole::AlignmentJudge, v);
        }
        auto judge = h.make();
        EvalOptions options;
        options.dataset_blobs_dir = root / "blobs";
        return evaluate_run(ds, runs, judge, options);
    };

    const auto report = run_eval();

    CHECK(report.total_prompts == 3);
    REQUIRE(report.records.size() == 2);
    CHECK(report.skipped == std::vector<std::string>{"p3"});
    CHECK(report.coverage() == doctest::Approx(2.0 / 3.0));

    CHECK(report.records[0].score.s == Rational(1, 2));
    CHECK(report.records[1].score.s == Rational(1, 1));
    REQUIRE(report.records[0].alignment.has_value());
    CHECK(report.records[0].alignment->a == Rational(1, 1));
    CHECK(report.records[1].alignment->a == Rational(1, 2));

    // class means: Animal 1/2, Food 1/1, All = 3/4
    REQUIRE(report.accuracy_by_class.rows.size() == 3);
    CHECK(report.accuracy_by_class.rows[0].group == "Animal");
    CHECK(report.accuracy_by_class.rows[0].mean == Rational(1, 2));
    CHECK(report.accuracy_by_class.rows[1].group == "Food");
    CHECK(report.accuracy_by_class.rows[1].mean == Rational(1, 1));
    CHECK(report.accuracy_by_class.rows[2].group == "All");
    CHECK(report.accuracy_by_class.rows[2].mean == Rational(3, 4));
    REQUIRE(report.generation_accuracy().has_value());
    CHECK(*report.generation_accuracy() == Rational(3, 4));

    // concepts: PF only from p1 (1/2); CC and TC from p2 (1/1 each)
    REQUIRE(report.accuracy_by_concept.rows.size() == 3);
    CHECK(report.accuracy_by_concept.rows[0].group == "PF");
    CHECK(report.accuracy_by_concept.rows[0].mean == Rational(1, 2));
    CHECK(report.accuracy_by_concept.rows[1].group == "CC");
    CHECK(report.accuracy_by_concept.rows[1].mean == Rational(1, 1));
    CHECK(report.accuracy_by_concept.rows[2].group == "TC");
    CHECK(report.accuracy_by_concept.rows[2].mean == Rational(1, 1));

    // alignment by class: Animal 1/1, Food 1/2, All 3/4
    REQUIRE(report.retrieval_accuracy().has_value());
    CHECK(*report.retrieval_accuracy() == Rational(3, 4));

    CHECK(report.avg_iters == doctest::Approx(2.5));
    CHECK(report.avg_prompt_tokens == doctest::Approx(3.0));  // 4 and 2 tokens
    CHECK(report.audited_judgments == 0);

    // identical inputs produce identical reports
    const auto again = run_eval();
    CHECK(report.to_json() == again.to_json());

    const auto rendered = report.render();
    CHECK(rendered.find("Coverage: 2/3") != std::string::npos);
    CHECK(rendered.find("Animal") != std::string::npos);

    // empty dataset is a precondition error
    EvalHarness h;
    auto judge = h.make();
    CHECK_THROWS_AS(evaluate_run(Dataset{}, runs, judge, EvalOptions{}), PreconditionError);
}

TEST_CASE("dataset serialization round trip and validation") {
    const auto root = fresh_temp_dir("dataset");
    const auto ds = make_dataset(root / "blobs");
    const auto json_text = dataset_to_json(ds);
    const auto loaded = dataset_from_json(json_text);
    CHECK(loaded.prompts.size() == ds.prompts.size());
    CHECK(loaded.questions.size() == ds.questions.size());
    CHECK(loaded.features.size() == ds.features.size());
    CHECK(dataset_to_json(loaded) == json_text);

    CHECK_THROWS_AS(dataset_from_json("{broken"), ParseError);
    CHECK_THROWS_AS(
        dataset_from_json(
            R"({"prompts":[{"id":"a","text":"x","entity_class":"NotAClass"}]})"),
        ValidationError);
    CHECK_THROWS_AS(
        dataset_from_json(
            R"({"prompts":[{"id":"a","text":"x","entity_class":"Food"},
                            {"id":"a","text":"y","entity_class":"Food"}]})"),
        ValidationError);
}
