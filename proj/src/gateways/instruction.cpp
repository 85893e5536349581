// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/instruction.hpp"

#include <algorithm>
#include <cctype>

#include "orig/common/error.hpp"

namespace orig::gateways {

const char* to_string(InstructionRole role) {
    switch (role) {
        case InstructionRole::Bootstrap: return "Bootstrap";
        case InstructionRole::QueryPlanning: return "QueryPlanning";
        case InstructionRole::TextFilter: return "TextFilter";
        case InstructionRole::ImageFilter: return "ImageFilter";
        case InstructionRole::Sufficiency: return "Sufficiency";
        case InstructionRole::ContentRefine: return "ContentRefine";
        case InstructionRole::VisualRefine: return "VisualRefine";
        case InstructionRole::PromptExtend: return "PromptExtend";
        case InstructionRole::QaJudge: return "QaJudge";
        case InstructionRole::AlignmentJudge: return "AlignmentJudge";
    }
    return "Unknown";
}

namespace {

const std::string kBootstrap = R"(You rank web search snippets by how useful the page behind them is for
grounding an image-generation prompt in verifiable facts.

Prompt: {prompt}

Snippets:
{snippets}

Respond with JSON only: {"ranking": [..]} listing every snippet number
(1-based) from most to least relevant.)";

const std::string kQueryPlanning = R"(You plan the next retrieval round for a factual image-generation task.
Compare the prompt with the knowledge gathered so far, identify missing or
under-specified information, and decompose the gaps into sub-questions.
Map each sub-question to the modality that answers it best: textual queries
for attributes, relations and events; image queries for appearance, spatial
configuration and other perceptual cues.

Prompt: {prompt}

{knowledge}

Respond with JSON only:
{"sub_questions": [".."], "text_queries": [".."], "image_queries": [".."]}
Propose between one and five queries in total across both modalities. If the
knowledge already covers the prompt, return empty lists.)";

const std::string kTextFilter = R"(You filter raw text snippets retrieved for a factual image-generation
prompt. Keep a candidate only if it is semantically aligned with the prompt
and factually consistent with the knowledge gathered so far. Select, never
rewrite.

Prompt: {prompt}

{knowledge}

Candidates:
{candidates}

Respond with JSON only: {"keep": [..]} listing the candidate numbers
(1-based) to retain; use [] to drop all.)";

const std::string kImageFilter = R"(You filter retrieved candidate images for a factual image-generation
prompt. Keep an image only if it is coherent with both the textual evidence
and the visual evidence gathered so far. Select, never edit.

Prompt: {prompt}

{knowledge}

Candidates:
{candidates}

Respond with JSON only: {"keep": [..]} listing the candidate numbers
(1-based) to retain; use [] to drop all.)";

const std::string kSufficiency = R"(You decide whether the knowledge gathered so far sufficiently addresses the
open sub-questions for a factual image-generation prompt.

Prompt: {prompt}

{knowledge}

Open sub-questions:
{questions}

Respond with JSON only: {"decision": "Retrieval"} to run another retrieval
round, or {"decision": "Refine"} to proceed to prompt construction. You may
add a "rationale" field.)";

const std::string kContentRefine = R"(You perform fine-grained refinement of accumulated evidence for a factual
image-generation prompt. Extract the visually descriptive, generation-
relevant textual features, and deduplicate the image set down to the
references worth keeping.

Prompt: {prompt}

{knowledge}

Respond with JSON only:
{"textual_features": [".."], "keep_images": [..]}
where keep_images lists image numbers (1-based) from the knowledge base.)";

const std::string kVisualRefine = R"(You extract visual control features from the refined reference images for a
factual image-generation prompt. Using the textual features as guidance,
identify the critical visual elements the generator must preserve and ignore
irrelevant background content.

Prompt: {prompt}

Textual features:
{textual_features}

Refined reference images:
{images}

Respond with JSON only: {"visual_features": [".."]}.)";

const std::string kPromptExtend = R"(You write the final generation prompt for a factual image-generation task.
Integrate the factual textual features and the visual control features into
an extended prompt that stays faithful to the original intent and directs
attention to the critical elements of the reference images.

Original prompt: {prompt}

Textual features:
{textual_features}

Visual control features:
{visual_features}

Reference images:
{images}

Respond with JSON only: {"prompt": ".."}.)";

const std::string kQaJudge = R"(You judge a generated image against one true/false statement.{reference_note}
Answer True only if the image clearly satisfies the statement.

Statement: {question}

Respond with exactly one word: True or False.)";

const std::string kAlignmentJudge = R"(You judge whether retrieved evidence supports one ground-truth feature of an
image-generation prompt.

Feature: {feature}

Evidence:
{evidence}

Respond with exactly one word: True if the evidence supports the feature,
otherwise False.)";

}  // namespace

const std::string& instruction_template(InstructionRole role) {
    switch (role) {
        case InstructionRole::Bootstrap: return kBootstrap;
        case InstructionRole::QueryPlanning: return kQueryPlanning;
        case InstructionRole::TextFilter: return kTextFilter;
        case InstructionRole::ImageFilter: return kImageFilter;
        case InstructionRole::Sufficiency: return kSufficiency;
        case InstructionRole::ContentRefine: return kContentRefine;
        case InstructionRole::VisualRefine: return kVisualRefine;
        case InstructionRole::PromptExtend: return kPromptExtend;
        case InstructionRole::QaJudge: return kQaJudge;
        case InstructionRole::AlignmentJudge: return kAlignmentJudge;
    }
    throw ValidationError("unknown instruction role");
}

namespace {

// A placeholder is {name} where name is lowercase letters and underscores.
// Brace pairs that do not match this shape (e.g. JSON examples inside the
// template) are left verbatim.
bool parse_placeholder(const std::string& text, std::size_t open, std::string& name,
                       std::size_t& close) {
    std::size_t i = open + 1;
    while (i < text.size() && (std::islower(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
    }
    if (i == open + 1 || i >= text.size() || text[i] != '}') return false;
    name = text.substr(open + 1, i - open - 1);
    close = i;
    return true;
}

}  // namespace

std::vector<std::string> placeholders_of(InstructionRole role) {
    const auto& tmpl = instruction_template(role);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] != '{') continue;
        std::string name;
        std::size_t close = 0;
        if (parse_placeholder(tmpl, i, name, close)) {
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            i = close;
        }
    }
    return names;
}

std::string render_instruction(InstructionRole role,
                               const std::map<std::string, std::string>& vars) {
    const auto& tmpl = instruction_template(role);
    std::string out;
    out.reserve(tmpl.size());
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{') {
            std::string name;
            std::size_t close = 0;
            if (parse_placeholder(tmpl, i, name, close)) {
                const auto it = vars.find(name);
                if (it == vars.end()) {
                    throw ValidationError(std::string("unbound placeholder '") + name +
                                          "' for role " + to_string(role));
                }
                out += it->second;
                i = close;
                continue;
            }
        }
        out.push_back(tmpl[i]);
    }
    return out;
}

}  // namespace orig::gateways
