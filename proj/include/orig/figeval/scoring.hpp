// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orig/knowledge/evidence.hpp"

namespace orig::figeval {

// Exact rational in lowest terms; scores are counts over counts and must
// stay exact through aggregation.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    Rational operator+(const Rational& other) const;
    Rational operator/(long long divisor) const;
    bool operator==(const Rational&) const = default;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    double pct() const { return value() * 100.0; }
};

// True/false question about a generated image; gold answer is always True,
// so the judged value is directly the correctness bit.
struct EvalQuestion {
    std::string id;
    std::string prompt_id;
    std::string statement;
    knowledge::ConceptTag concept_tag = knowledge::ConceptTag::PF;
    bool needs_reference_image = false;
    std::optional<std::string> reference_blob;
};

struct Judgment {
    std::string question_id;
    bool value = false;
    std::string judge_id;
    // Set when the verdict was unparseable after the re-ask and scored False.
    bool audit_flag = false;
};

struct PromptScore {
    std::string prompt_id;
    Rational s;          // true_count / m
    int m = 0;           // question count
    std::map<knowledge::ConceptTag, Rational> per_concept;
};

struct AlignmentScore {
    std::string prompt_id;
    Rational a;  // aligned_count / n
    int n = 0;
    std::vector<bool> per_feature;
};

// Exact per-prompt accuracy; judgments must cover every question exactly
// once or a coverage error listing the offending ids is thrown.
PromptScore score_prompt(const std::vector<Judgment>& judgments,
                         const std::vector<EvalQuestion>& questions);

enum class Grouping { EntityClass, Concept, All };

struct ReportRow {
    std::string group;
    Rational mean;  // unweighted mean of per-prompt scores in the group
    int support = 0;
};

struct ReportTable {
    Grouping grouping = Grouping::All;
    std::vector<ReportRow> rows;
};

// Unweighted (macro) averaging of per-prompt scores. EntityClass tables end
// with an "All" row equal to the mean of the class means; Concept grouping
// averages per-prompt concept means, excluding prompts without questions in
// that concept.
ReportTable macro_average(const std::vector<PromptScore>& scores,
                          const std::map<std::string, knowledge::EntityClass>& prompt_classes,
                          Grouping grouping);

}  // namespace orig::figeval
