// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace orig::figeval {

struct CorrelationTriple {
    double pearson_r = 0.0;
    double spearman_rho = 0.0;
    double kendall_tau = 0.0;
};

// Average (fractional) ranks, ties share the mean of their rank positions.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson over raw values, two-pass mean-deviation form.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Spearman: Pearson over average-ranked values.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Kendall tau-b: pairwise concordance with tie correction.
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

// All three statistics at once. Preconditions: equal lengths, size >= 3,
// finite values. Zero variance in either vector (or an all-tied vector for
// tau-b) raises UndefinedCorrelationError rather than returning NaN.
CorrelationTriple correlations(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace orig::figeval
