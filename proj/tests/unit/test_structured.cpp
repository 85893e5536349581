// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "orig/gateways/instruction.hpp"
#include "orig/gateways/structured.hpp"

using namespace orig;
using namespace orig::gateways;

TEST_CASE("decision parsing") {
    CHECK(parse_decision(R"({"decision":"Retrieval"})").decision == Decision::Retrieval);
    CHECK(parse_decision(R"({"decision":"Refine"})").decision == Decision::Refine);
    CHECK(parse_decision(R"(Sure! {"decision":"Refine"} hope that helps)").decision ==
          Decision::Refine);

    try {
        parse_decision(R"({"decision":"maybe"})");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("decision") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_decision("no json at all"), ParseError);
}

TEST_CASE("extraction survives fuzzed prose wrappers") {
    std::mt19937 rng(99);
    const std::vector<std::string> prefixes = {"",
                                               "Sure thing! ",
                                               "Here is my answer:\n```json\n",
                                               "Note {unbalanced brace first ",
                                               "Reasoning: 1) a 2) b.\n"};
    const std::vector<std::string> suffixes = {"", "\n```", " hope that helps", " {trailing"};
    for (int i = 0; i < 200; ++i) {
        const auto& pre = prefixes[rng() % prefixes.size()];
        const auto& post = suffixes[rng() % suffixes.size()];
        const bool retrieval = rng() % 2 == 0;
        const std::string payload = retrieval ? R"({"decision":"Retrieval"})"
                                              : R"({"decision":"Refine","rationale":"ok {fine}"})";
        const auto parsed = parse_decision(pre + payload + post);
        CHECK(parsed.decision == (retrieval ? Decision::Retrieval : Decision::Refine));
    }
}

TEST_CASE("query plan schema") {
    const auto plan = parse_query_plan(
        R"({"sub_questions":["q1"],"text_queries":["t1","t2"],"image_queries":["v1"]})");
    CHECK(plan.sub_questions == std::vector<std::string>{"q1"});
    CHECK(plan.text_queries.size() == 2);
    CHECK(plan.image_queries.size() == 1);
    CHECK_THROWS_AS(parse_query_plan(R"({"text_queries":[],"image_queries":[]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_query_plan(R"({"sub_questions":[1],"text_queries":[],"image_queries":[]})"),
                    ValidationError);
}

TEST_CASE("keep list validates range and deduplicates preserving order") {
    const auto keep = parse_keep_list(R"({"keep":[3,1,3,2]})", 4);
    CHECK(keep.keep == std::vector<int>{3, 1, 2});
    CHECK(parse_keep_list(R"({"keep":[]})", 4).keep.empty());
    CHECK_THROWS_AS(parse_keep_list(R"({"keep":[5]})", 4), ValidationError);
    CHECK_THROWS_AS(parse_keep_list(R"({"keep":[0]})", 4), ValidationError);
    CHECK_THROWS_AS(parse_keep_list(R"({"keep":["1"]})", 4), ValidationError);
}

TEST_CASE("ranking validates range") {
    CHECK(parse_ranking(R"({"ranking":[2,1]})", 3).ranking == std::vector<int>{2, 1});
    CHECK_THROWS_AS(parse_ranking(R"({"ranking":[4]})", 3), ValidationError);
}

TEST_CASE("content refine and visual features schemas") {
    const auto refine =
        parse_content_refine(R"({"textual_features":["f1"],"keep_images":[2,1]})");
    CHECK(refine.textual_features == std::vector<std::string>{"f1"});
    CHECK(refine.keep_images == std::vector<int>{2, 1});
    CHECK_THROWS_AS(parse_content_refine(R"({"textual_features":["f1"]})"), ValidationError);

    CHECK(parse_visual_features(R"({"visual_features":[]})").visual_features.empty());
    CHECK_THROWS_AS(parse_visual_features(R"({"other":[]})"), ValidationError);
}

TEST_CASE("extended prompt requires non-empty text") {
    CHECK(parse_extended_prompt(R"({"prompt":"a scene"})").prompt == "a scene");
    CHECK_THROWS_AS(parse_extended_prompt(R"({"prompt":"  "})"), ValidationError);
    CHECK_THROWS_AS(parse_extended_prompt(R"({"prompt":1})"), ValidationError);
}

TEST_CASE("verdict parser tolerates case and prose") {
    CHECK(parse_verdict("True"));
    CHECK(parse_verdict("Answer: TRUE."));
    CHECK_FALSE(parse_verdict("the answer is false!"));
    CHECK_FALSE(parse_verdict("FALSE"));
    CHECK_THROWS_AS(parse_verdict("could be true or false"), ParseError);
    CHECK_THROWS_AS(parse_verdict("no verdict here"), ParseError);
    CHECK_THROWS_AS(parse_verdict("truthful"), ParseError);  // word boundary
}

TEST_CASE("instruction templates render and reject unbound placeholders") {
    for (const auto role :
         {InstructionRole::Bootstrap, InstructionRole::QueryPlanning, InstructionRole::TextFilter,
          InstructionRole::ImageFilter, InstructionRole::Sufficiency,
          InstructionRole::ContentRefine, InstructionRole::VisualRefine,
          InstructionRole::PromptExtend, InstructionRole::QaJudge,
          InstructionRole::AlignmentJudge}) {
        const auto names = placeholders_of(role);
        CHECK(!instruction_template(role).empty());
        CHECK(!names.empty());
        std::map<std::string, std::string> vars;
        for (const auto& n : names) vars[n] = "<" + n + ">";
        const auto rendered = render_instruction(role, vars);
        for (const auto& n : names) {
            CHECK(rendered.find("<" + n + ">") != std::string::npos);
            CHECK(rendered.find("{" + n + "}") == std::string::npos);
        }
    }
    CHECK_THROWS_AS(render_instruction(InstructionRole::Sufficiency, {{"prompt", "p"}}),
                    ValidationError);
    // JSON examples in templates keep their braces
    const auto rendered = render_instruction(
        InstructionRole::Sufficiency,
        {{"prompt", "p"}, {"knowledge", "k"}, {"questions", "q"}});
    CHECK(rendered.find(R"({"decision": "Retrieval"})") != std::string::npos);
}
