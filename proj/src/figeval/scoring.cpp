// SPDX-License-Identifier: Apache-2.0
#include "orig/figeval/scoring.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "orig/common/error.hpp"

namespace orig::figeval {

using knowledge::ConceptTag;
using knowledge::EntityClass;

namespace {

long long gcd_ll(long long a, long long b) {
    while (b != 0) {
        const long long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

Rational from_i128(__int128 num, __int128 den) {
    if (den == 0) throw PreconditionError("rational: zero denominator");
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (num == 0) den = 1;
    const __int128 g128 = [&] {
        __int128 a = num < 0 ? -num : num;
        __int128 b = den;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? static_cast<__int128>(1) : a;
    }();
    num /= g128;
    den /= g128;
    constexpr __int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax) {
        throw ValidationError("rational: overflow during aggregation");
    }
    return Rational(static_cast<long long>(num), static_cast<long long>(den));
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw PreconditionError("rational: zero denominator");
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (num == 0) {
        den = 1;
        return;
    }
    const long long g = gcd_ll(num, den);
    num /= g;
    den /= g;
}

Rational Rational::operator+(const Rational& other) const {
    const __int128 n =
        static_cast<__int128>(num) * other.den + static_cast<__int128>(other.num) * den;
    const __int128 d = static_cast<__int128>(den) * other.den;
    return from_i128(n, d);
}

Rational Rational::operator/(long long divisor) const {
    if (divisor == 0) throw PreconditionError("rational: division by zero");
    return from_i128(num, static_cast<__int128>(den) * divisor);
}

PromptScore score_prompt(const std::vector<Judgment>& judgments,
                         const std::vector<EvalQuestion>& questions) {
    if (questions.empty()) throw PreconditionError("score_prompt: no questions");

    std::map<std::string, bool> verdicts;
    std::set<std::string> duplicates;
    for (const auto& j : judgments) {
        if (!verdicts.emplace(j.question_id, j.value).second) duplicates.insert(j.question_id);
    }
    std::set<std::string> missing;
    std::set<std::string> expected;
    for (const auto& q : questions) {
        expected.insert(q.id);
        if (verdicts.find(q.id) == verdicts.end()) missing.insert(q.id);
    }
    std::set<std::string> extraneous;
    for (const auto& [id, v] : verdicts) {
        if (expected.find(id) == expected.end()) extraneous.insert(id);
    }
    if (!duplicates.empty() || !missing.empty() || !extraneous.empty()) {
        std::string detail = "score_prompt: judgment coverage error;";
        const auto join = [](const std::set<std::string>& ids) {
            std::string s;
            for (const auto& id : ids) s += (s.empty() ? "" : ",") + id;
            return s;
        };
        if (!missing.empty()) detail += " missing=[" + join(missing) + "]";
        if (!duplicates.empty()) detail += " duplicate=[" + join(duplicates) + "]";
        if (!extraneous.empty()) detail += " extraneous=[" + join(extraneous) + "]";
        throw Error(ErrorKind::Coverage, detail);
    }

    PromptScore score;
    score.prompt_id = questions.front().prompt_id;
    score.m = static_cast<int>(questions.size());
    long long true_count = 0;
    std::map<ConceptTag, std::pair<long long, long long>> concept_counts;  // true / total
    for (const auto& q : questions) {
        const bool v = verdicts.at(q.id);
        auto& [t, total] = concept_counts[q.concept_tag];
        total += 1;
        if (v) {
            ++true_count;
            ++t;
        }
    }
    score.s = Rational(true_count, score.m);
    for (const auto& [concept, counts] : concept_counts) {
        score.per_concept[concept] = Rational(counts.first, counts.second);
    }
    return score;
}

namespace {

Rational mean_of(const std::vector<Rational>& values) {
    Rational sum(0, 1);
    for (const auto& v : values) sum = sum + v;
    return sum / static_cast<long long>(values.size());
}

}  // namespace

ReportTable macro_average(const std::vector<PromptScore>& scores,
                          const std::map<std::string, EntityClass>& prompt_classes,
                          Grouping grouping) {
    ReportTable table;
    table.grouping = grouping;

    if (grouping == Grouping::Concept) {
        for (const ConceptTag concept : {ConceptTag::PF, ConceptTag::CC, ConceptTag::TC}) {
            std::vector<Rational> values;
            for (const auto& s : scores) {
                // prompts without questions in this concept are excluded
                if (const auto it = s.per_concept.find(concept); it != s.per_concept.end()) {
                    values.push_back(it->second);
                }
            }
            if (!values.empty()) {
                table.rows.push_back(
                    {knowledge::to_string(concept), mean_of(values), static_cast<int>(values.size())});
            }
        }
        return table;
    }

    // group per-prompt scores by entity class, in canonical class order
    std::map<EntityClass, std::vector<Rational>> by_class;
    for (const auto& s : scores) {
        const auto it = prompt_classes.find(s.prompt_id);
        if (it == prompt_classes.end()) {
            throw ValidationError("macro_average: no entity class for prompt " + s.prompt_id);
        }
        by_class[it->second].push_back(s.s);
    }
    std::vector<Rational> class_means;
    for (const auto& [cls, values] : by_class) {
        const Rational mean = mean_of(values);
        class_means.push_back(mean);
        if (grouping == Grouping::EntityClass) {
            table.rows.push_back({knowledge::to_string(cls), mean, static_cast<int>(values.size())});
        }
    }
    if (!class_means.empty()) {
        // the All row is the unweighted mean over class means
        table.rows.push_back(
            {"All", mean_of(class_means), static_cast<int>(scores.size())});
    }
    return table;
}

}  // namespace orig::figeval
