// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace orig::gateways {

// One role per reasoning-model call site. Bootstrap is the snippet-ranking
// instruction used ahead of page fetches; QaJudge and AlignmentJudge belong
// to the evaluation harness but share the model gateway.
enum class InstructionRole {
    Bootstrap,
    QueryPlanning,
    TextFilter,
    ImageFilter,
    Sufficiency,
    ContentRefine,
    VisualRefine,
    PromptExtend,
    QaJudge,
    AlignmentJudge,
};

const char* to_string(InstructionRole role);

// Template text with {name} placeholders for the given role.
const std::string& instruction_template(InstructionRole role);

// Placeholder names the pipeline must bind for the given role.
std::vector<std::string> placeholders_of(InstructionRole role);

// Substitutes every {name} placeholder; throws ValidationError when a
// placeholder has no binding.
std::string render_instruction(InstructionRole role,
                               const std::map<std::string, std::string>& vars);

}  // namespace orig::gateways
