// SPDX-License-Identifier: Apache-2.0
#include "orig/figeval/dataset.hpp"

#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"
#include "orig/common/strings.hpp"

namespace orig::figeval {

using nlohmann::json;

std::vector<EvalQuestion> Dataset::questions_of(const std::string& prompt_id) const {
    std::vector<EvalQuestion> out;
    for (const auto& q : questions) {
        if (q.prompt_id == prompt_id) out.push_back(q);
    }
    return out;
}

std::vector<knowledge::GroundTruthFeature> Dataset::features_of(const std::string& prompt_id) const {
    std::vector<knowledge::GroundTruthFeature> out;
    for (const auto& f : features) {
        if (f.prompt_id == prompt_id) out.push_back(f.feature);
    }
    return out;
}

std::map<std::string, knowledge::EntityClass> Dataset::class_index() const {
    std::map<std::string, knowledge::EntityClass> out;
    for (const auto& p : prompts) out[p.id] = p.entity_class;
    return out;
}

Dataset dataset_from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("dataset: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("dataset: root is not an object");

    Dataset ds;
    for (const auto& p : j.value("prompts", json::array())) {
        DatasetPrompt prompt;
        prompt.id = p.at("id").get<std::string>();
        prompt.text = p.at("text").get<std::string>();
        const auto cls_name = p.at("entity_class").get<std::string>();
        const auto cls = knowledge::entity_class_from_string(cls_name);
        if (!cls) throw ValidationError("dataset: unknown entity_class '" + cls_name + "'");
        prompt.entity_class = *cls;
        if (strings::trim(prompt.text).empty()) {
            throw ValidationError("dataset: prompt " + prompt.id + " has empty text");
        }
        for (const auto& existing : ds.prompts) {
            if (existing.id == prompt.id) {
                throw ValidationError("dataset: duplicate prompt id " + prompt.id);
            }
        }
        ds.prompts.push_back(std::move(prompt));
    }

    const auto parse_concept = [](const json& node) {
        const auto name = node.at("concept").get<std::string>();
        const auto concept_tag = knowledge::concept_from_string(name);
        if (!concept_tag) throw ValidationError("dataset: unknown concept '" + name + "'");
        return *concept_tag;
    };

    int feature_seq = 0;
    for (const auto& f : j.value("features", json::array())) {
        DatasetFeature df;
        df.prompt_id = f.at("prompt_id").get<std::string>();
        df.feature.id = f.value("id", df.prompt_id + "-f" + std::to_string(++feature_seq));
        df.feature.statement = f.at("statement").get<std::string>();
        df.feature.concept_tag = parse_concept(f);
        if (strings::trim(df.feature.statement).empty()) {
            throw ValidationError("dataset: feature " + df.feature.id + " has empty statement");
        }
        ds.features.push_back(std::move(df));
    }

    int question_seq = 0;
    for (const auto& q : j.value("questions", json::array())) {
        EvalQuestion question;
        question.prompt_id = q.at("prompt_id").get<std::string>();
        question.id = q.value("id", question.prompt_id + "-q" + std::to_string(++question_seq));
        question.statement = q.at("statement").get<std::string>();
        question.concept_tag = parse_concept(q);
        question.needs_reference_image = q.value("needs_reference_image", false);
        if (q.contains("reference_blob")) {
            question.reference_blob = q["reference_blob"].get<std::string>();
        }
        if (question.needs_reference_image && !question.reference_blob) {
            throw ValidationError("dataset: question " + question.id +
                                  " needs a reference image but has no reference_blob");
        }
        ds.questions.push_back(std::move(question));
    }
    return ds;
}

std::string dataset_to_json(const Dataset& ds) {
    json prompts = json::array();
    for (const auto& p : ds.prompts) {
        prompts.push_back(
            {{"id", p.id}, {"text", p.text}, {"entity_class", knowledge::to_string(p.entity_class)}});
    }
    json features = json::array();
    for (const auto& f : ds.features) {
        features.push_back({{"prompt_id", f.prompt_id},
                            {"id", f.feature.id},
                            {"statement", f.feature.statement},
                            {"concept", knowledge::to_string(f.feature.concept_tag)}});
    }
    json questions = json::array();
    for (const auto& q : ds.questions) {
        json node = {{"prompt_id", q.prompt_id},
                     {"id", q.id},
                     {"statement", q.statement},
                     {"concept", knowledge::to_string(q.concept_tag)},
                     {"needs_reference_image", q.needs_reference_image}};
        if (q.reference_blob) node["reference_blob"] = *q.reference_blob;
        questions.push_back(std::move(node));
    }
    const json j = {
        {"version", 1}, {"prompts", prompts}, {"features", features}, {"questions", questions}};
    return j.dump(2) + "\n";
}

Dataset load_dataset(const std::filesystem::path& path) {
    if (!io::exists(path)) throw PersistenceError("dataset file not found: " + path.string());
    return dataset_from_json(io::read_file(path));
}

}  // namespace orig::figeval
