// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orig/figeval/scoring.hpp"
#include "orig/gateways/hub.hpp"
#include "orig/knowledge/knowledge_base.hpp"

namespace orig::figeval {

// Judges one question against a generated image (and, when the question
// demands it, a reference image) with the fixed QA template. The verdict
// parse tolerates case and surrounding prose; an unparseable verdict is
// re-asked once and then scored False with the audit flag set. At most two
// model calls are ever issued per question.
Judgment judge_question(const EvalQuestion& question, const std::string& generated_image_bytes,
                        const std::optional<std::string>& reference_image_bytes,
                        gateways::GatewayHub& judge, const std::string& judge_id = "judge");

// One binary judgment per ground-truth feature against a digest of the
// retrieved evidence; a = aligned / n.
AlignmentScore alignment_score(const std::string& prompt_id,
                               const std::vector<knowledge::GroundTruthFeature>& features,
                               const knowledge::KnowledgeBase& kb, gateways::GatewayHub& judge,
                               std::size_t digest_max_chars = 8000);

}  // namespace orig::figeval
