// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/structured.hpp"

#include <cctype>
#include <nlohmann/json.hpp>
#include <set>

#include "orig/common/error.hpp"
#include "orig/common/strings.hpp"

namespace orig::gateways {

using nlohmann::json;

namespace {

// Finds the end of a balanced JSON value starting at `start` ('{' or '[').
// Returns npos when the value never closes.
std::size_t find_balanced_end(const std::string& s, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            --depth;
            if (depth == 0) return i;
            if (depth < 0) return std::string::npos;
        }
    }
    return std::string::npos;
}

json parse_first_json(const std::string& raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '{' && raw[i] != '[') continue;
        const auto end = find_balanced_end(raw, i);
        if (end == std::string::npos) continue;
        const auto candidate = raw.substr(i, end - i + 1);
        try {
            return json::parse(candidate);
        } catch (const json::parse_error&) {
            // fall through to the next opening bracket
        }
    }
    throw ParseError("no parseable JSON block in model output: " +
                     strings::ascii_preview(raw, 200));
}

std::vector<std::string> string_array(const json& obj, const char* field) {
    const auto it = obj.find(field);
    if (it == obj.end() || !it->is_array()) {
        throw ValidationError(std::string("field '") + field + "' missing or not an array");
    }
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw ValidationError(std::string("field '") + field + "' has a non-string element");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::vector<int> index_array(const json& obj, const char* field, int min_value, int max_value) {
    const auto it = obj.find(field);
    if (it == obj.end() || !it->is_array()) {
        throw ValidationError(std::string("field '") + field + "' missing or not an array");
    }
    std::vector<int> out;
    std::set<int> seen;
    for (const auto& v : *it) {
        if (!v.is_number_integer()) {
            throw ValidationError(std::string("field '") + field + "' has a non-integer element");
        }
        const int idx = v.get<int>();
        if (idx < min_value || (max_value > 0 && idx > max_value)) {
            throw ValidationError(std::string("field '") + field + "' index " +
                                  std::to_string(idx) + " out of range");
        }
        if (seen.insert(idx).second) out.push_back(idx);
    }
    return out;
}

}  // namespace

std::string extract_json_block(const std::string& raw) { return parse_first_json(raw).dump(); }

QueryPlanPayload parse_query_plan(const std::string& raw) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("query plan is not a JSON object");
    QueryPlanPayload out;
    out.sub_questions = string_array(j, "sub_questions");
    out.text_queries = string_array(j, "text_queries");
    out.image_queries = string_array(j, "image_queries");
    return out;
}

KeepListPayload parse_keep_list(const std::string& raw, int candidate_count) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("keep list is not a JSON object");
    return {index_array(j, "keep", 1, candidate_count)};
}

RankingPayload parse_ranking(const std::string& raw, int candidate_count) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("ranking is not a JSON object");
    return {index_array(j, "ranking", 1, candidate_count)};
}

DecisionPayload parse_decision(const std::string& raw) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("decision is not a JSON object");
    const auto it = j.find("decision");
    if (it == j.end() || !it->is_string()) {
        throw ValidationError("field 'decision' missing or not a string");
    }
    DecisionPayload out;
    const auto value = strings::to_lower(strings::trim(it->get<std::string>()));
    if (value == "retrieval") {
        out.decision = Decision::Retrieval;
    } else if (value == "refine") {
        out.decision = Decision::Refine;
    } else {
        throw ValidationError("field 'decision' must be Retrieval or Refine, got '" +
                              it->get<std::string>() + "'");
    }
    if (const auto r = j.find("rationale"); r != j.end() && r->is_string()) {
        out.rationale = r->get<std::string>();
    }
    return out;
}

VisualFeaturesPayload parse_visual_features(const std::string& raw) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("visual features payload is not a JSON object");
    return {string_array(j, "visual_features")};
}

ContentRefinePayload parse_content_refine(const std::string& raw) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("refine payload is not a JSON object");
    ContentRefinePayload out;
    out.textual_features = string_array(j, "textual_features");
    out.keep_images = index_array(j, "keep_images", 1, 0);
    return out;
}

ExtendedPromptPayload parse_extended_prompt(const std::string& raw) {
    const json j = parse_first_json(raw);
    if (!j.is_object()) throw ValidationError("extended prompt payload is not a JSON object");
    const auto it = j.find("prompt");
    if (it == j.end() || !it->is_string() || strings::trim(it->get<std::string>()).empty()) {
        throw ValidationError("field 'prompt' missing or empty");
    }
    return {it->get<std::string>()};
}

bool parse_verdict(const std::string& raw) {
    const auto lowered = strings::to_lower(raw);
    const auto is_word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    };
    const auto find_word = [&](const std::string& word) {
        std::size_t pos = 0;
        while ((pos = lowered.find(word, pos)) != std::string::npos) {
            const bool left_ok = pos == 0 || !is_word_char(lowered[pos - 1]);
            const std::size_t end = pos + word.size();
            const bool right_ok = end >= lowered.size() || !is_word_char(lowered[end]);
            if (left_ok && right_ok) return true;
            pos = end;
        }
        return false;
    };
    const bool has_true = find_word("true");
    const bool has_false = find_word("false");
    if (has_true == has_false) {
        throw ParseError("verdict is not a clear True/False: " + strings::ascii_preview(raw, 120));
    }
    return has_true;
}

}  // namespace orig::gateways
