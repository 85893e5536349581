// SPDX-License-Identifier: Apache-2.0
#include "orig/figeval/judge.hpp"

#include <spdlog/spdlog.h>

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/gateways/structured.hpp"

namespace orig::figeval {

using gateways::AttachedImage;
using gateways::InstructionRole;

namespace {

// verdict with one re-ask; nullopt when both attempts were unparseable
std::optional<bool> ask_verdict(gateways::GatewayHub& judge, InstructionRole role,
                                const std::map<std::string, std::string>& vars,
                                const std::vector<AttachedImage>& images) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        const auto exchange = judge.model_invoke(role, vars, images);
        try {
            return gateways::parse_verdict(exchange.raw_response);
        } catch (const ParseError& e) {
            spdlog::warn("judge verdict unparseable (attempt {}): {}", attempt + 1, e.what());
        }
    }
    return std::nullopt;
}

}  // namespace

Judgment judge_question(const EvalQuestion& question, const std::string& generated_image_bytes,
                        const std::optional<std::string>& reference_image_bytes,
                        gateways::GatewayHub& judge, const std::string& judge_id) {
    if (question.needs_reference_image && !reference_image_bytes) {
        throw PreconditionError("judge_question: question " + question.id +
                                " requires a reference image");
    }
    if (!question.needs_reference_image && reference_image_bytes) {
        throw PreconditionError("judge_question: question " + question.id +
                                " does not take a reference image");
    }

    std::vector<AttachedImage> images;
    images.emplace_back(hashing::sha256_hex(generated_image_bytes), generated_image_bytes);
    std::string reference_note;
    if (reference_image_bytes) {
        images.emplace_back(hashing::sha256_hex(*reference_image_bytes), *reference_image_bytes);
        reference_note = " A ground-truth reference image follows the generated image.";
    }

    Judgment out;
    out.question_id = question.id;
    out.judge_id = judge_id;
    const auto verdict = ask_verdict(
        judge, InstructionRole::QaJudge,
        {{"question", question.statement}, {"reference_note", reference_note}}, images);
    if (verdict) {
        out.value = *verdict;
    } else {
        out.value = false;  // conservative scoring
        out.audit_flag = true;
    }
    return out;
}

AlignmentScore alignment_score(const std::string& prompt_id,
                               const std::vector<knowledge::GroundTruthFeature>& features,
                               const knowledge::KnowledgeBase& kb, gateways::GatewayHub& judge,
                               std::size_t digest_max_chars) {
    if (features.empty()) {
        throw PreconditionError("alignment_score: no features for prompt " + prompt_id);
    }
    const std::string evidence = knowledge::kb_context_digest(kb, digest_max_chars);

    AlignmentScore out;
    out.prompt_id = prompt_id;
    out.n = static_cast<int>(features.size());
    long long aligned = 0;
    for (const auto& f : features) {
        const auto verdict =
            ask_verdict(judge, InstructionRole::AlignmentJudge,
                        {{"feature", f.statement}, {"evidence", evidence}}, {});
        const bool hit = verdict.value_or(false);
        out.per_feature.push_back(hit);
        if (hit) ++aligned;
    }
    out.a = Rational(aligned, out.n);
    return out;
}

}  // namespace orig::figeval
