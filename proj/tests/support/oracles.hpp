// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orig/gateways/backends.hpp"
#include "orig/gateways/cassette.hpp"

namespace orig::testsupport {

// Brute-force hash-set union in first-seen order, independent of the
// knowledge-base implementation.
std::vector<std::string> union_oracle(const std::vector<std::vector<std::string>>& batches);

// First-k accessible unique downloads in rank order. bytes_by_url maps a url
// to its bytes; absent url = dead link.
std::vector<std::string> first_k_unique_oracle(
    const std::vector<std::string>& urls_in_rank_order,
    const std::map<std::string, std::string>& bytes_by_url, int k);

// Exact fraction with explicit comparison; intentionally separate from the
// production Rational type.
struct Fraction {
    long long num = 0;
    long long den = 1;
};
bool fraction_equal(const Fraction& a, long long num, long long den);

// Counting oracle for per-prompt accuracy.
Fraction counting_oracle(const std::vector<bool>& verdicts);

// Unweighted mean of fractions via exact arithmetic.
Fraction mean_oracle(const std::vector<Fraction>& values);

// Correlation oracles straight from the definitions: raw-moment covariance
// for Pearson, rank-then-covariance for Spearman, explicit pair counting
// with tie correction for Kendall tau-b.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y);
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y);
double kendall_oracle(const std::vector<double>& x, const std::vector<double>& y);

// --- cassette transcript auditing -------------------------------------

struct TranscriptCheck {
    bool ok = false;
    std::string error;
};

// Validates the stage order of a recorded run: bootstrap exchanges, then
// rounds of (QueryPlanning, retrieval, optional filters, optional
// Sufficiency), then ContentRefine, optional VisualRefine, PromptExtend and
// an optional generation call.
TranscriptCheck check_transcript_order(const std::vector<gateways::CassetteEntry>& entries);

// Independent per-stage accounting over cassette entries: stage boundaries
// are reconstructed from the model roles alone.
struct StageSums {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t retrieval_calls = 0;
};
std::map<std::string, StageSums> stage_sums_oracle(
    const std::vector<gateways::CassetteEntry>& entries);

}  // namespace orig::testsupport
