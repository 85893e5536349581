// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace orig::knowledge {

// The ten entity classes of the evaluation dataset.
enum class EntityClass {
    Animal,
    Sports,
    Transportation,
    Landmarks,
    Food,
    People,
    Plants,
    Products,
    Culture,
    Events,
};

// Concept dimensions: perceptual fidelity, compositional consistency,
// temporal consistency.
enum class ConceptTag { PF, CC, TC };

const char* to_string(EntityClass c);
const char* to_string(ConceptTag c);
std::optional<EntityClass> entity_class_from_string(const std::string& s);
std::optional<ConceptTag> concept_from_string(const std::string& s);

struct UserPrompt {
    std::string id;
    std::string text;
    std::optional<EntityClass> entity_class;
    std::set<ConceptTag> concept_tags;
};

// Throws PreconditionError when the prompt text is blank after trimming.
void validate_prompt(const UserPrompt& prompt);

struct TextEvidence {
    std::string content;
    std::string source_url;
    std::string snippet;
    std::string retrieved_at;  // ISO-8601 UTC
    std::string query_of_origin;
    std::string content_hash;  // SHA-256 of normalized content

    bool operator==(const TextEvidence&) const = default;
};

struct ImageEvidence {
    std::string bytes_ref;  // content-addressed blob key
    std::string title;
    std::string source_url;
    std::string query_of_origin;
    std::string content_hash;  // SHA-256 of raw bytes
    std::string mime;
    int width = 0;
    int height = 0;

    bool operator==(const ImageEvidence&) const = default;
};

// Builds text evidence with its normalized-content hash filled in.
TextEvidence make_text_evidence(std::string content, std::string source_url, std::string snippet,
                                std::string retrieved_at, std::string query_of_origin);

struct GroundTruthFeature {
    std::string id;
    std::string statement;
    ConceptTag concept_tag = ConceptTag::PF;
};

}  // namespace orig::knowledge
