// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "orig/figeval/scoring.hpp"
#include "orig/knowledge/evidence.hpp"

namespace orig::figeval {

struct DatasetPrompt {
    std::string id;
    std::string text;
    knowledge::EntityClass entity_class = knowledge::EntityClass::Animal;
};

struct DatasetFeature {
    std::string prompt_id;
    knowledge::GroundTruthFeature feature;
};

// Evaluation dataset: prompts with entity classes, ground-truth features and
// true/false questions. Serialized as one JSON file; question reference
// images live in a sibling blobs/ directory keyed by reference_blob.
struct Dataset {
    std::vector<DatasetPrompt> prompts;
    std::vector<DatasetFeature> features;
    std::vector<EvalQuestion> questions;

    std::vector<EvalQuestion> questions_of(const std::string& prompt_id) const;
    std::vector<knowledge::GroundTruthFeature> features_of(const std::string& prompt_id) const;
    std::map<std::string, knowledge::EntityClass> class_index() const;
};

Dataset dataset_from_json(const std::string& content);
std::string dataset_to_json(const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace orig::figeval
