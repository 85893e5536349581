// SPDX-License-Identifier: Apache-2.0
#include "orig/knowledge/evidence.hpp"

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/common/strings.hpp"

namespace orig::knowledge {

const char* to_string(EntityClass c) {
    switch (c) {
        case EntityClass::Animal: return "Animal";
        case EntityClass::Sports: return "Sports";
        case EntityClass::Transportation: return "Transportation";
        case EntityClass::Landmarks: return "Landmarks";
        case EntityClass::Food: return "Food";
        case EntityClass::People: return "People";
        case EntityClass::Plants: return "Plants";
        case EntityClass::Products: return "Products";
        case EntityClass::Culture: return "Culture";
        case EntityClass::Events: return "Events";
    }
    return "Unknown";
}

const char* to_string(ConceptTag c) {
    switch (c) {
        case ConceptTag::PF: return "PF";
        case ConceptTag::CC: return "CC";
        case ConceptTag::TC: return "TC";
    }
    return "Unknown";
}

std::optional<EntityClass> entity_class_from_string(const std::string& s) {
    static const std::pair<const char*, EntityClass> kNames[] = {
        {"Animal", EntityClass::Animal},       {"Sports", EntityClass::Sports},
        {"Transportation", EntityClass::Transportation},
        {"Landmarks", EntityClass::Landmarks}, {"Food", EntityClass::Food},
        {"People", EntityClass::People},       {"Plants", EntityClass::Plants},
        {"Products", EntityClass::Products},   {"Culture", EntityClass::Culture},
        {"Events", EntityClass::Events},
    };
    for (const auto& [name, value] : kNames) {
        if (s == name) return value;
    }
    return std::nullopt;
}

std::optional<ConceptTag> concept_from_string(const std::string& s) {
    if (s == "PF") return ConceptTag::PF;
    if (s == "CC") return ConceptTag::CC;
    if (s == "TC") return ConceptTag::TC;
    return std::nullopt;
}

void validate_prompt(const UserPrompt& prompt) {
    if (strings::trim(prompt.text).empty()) {
        throw PreconditionError("prompt text is empty (id=" + prompt.id + ")");
    }
}

TextEvidence make_text_evidence(std::string content, std::string source_url, std::string snippet,
                                std::string retrieved_at, std::string query_of_origin) {
    TextEvidence ev;
    ev.content = strings::sanitize_utf8(content);
    ev.source_url = std::move(source_url);
    ev.snippet = strings::sanitize_utf8(snippet);
    ev.retrieved_at = std::move(retrieved_at);
    ev.query_of_origin = std::move(query_of_origin);
    ev.content_hash = hashing::text_content_hash(ev.content);
    return ev;
}

}  // namespace orig::knowledge
