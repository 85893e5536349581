// SPDX-License-Identifier: Apache-2.0
#include "orig/figeval/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orig/common/error.hpp"

namespace orig::figeval {

namespace {

void check_inputs(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw PreconditionError("correlations: vectors differ in length");
    }
    if (x.size() < 3) {
        throw PreconditionError("correlations: need at least 3 observations");
    }
    for (const double v : x) {
        if (!std::isfinite(v)) throw PreconditionError("correlations: non-finite value in x");
    }
    for (const double v : y) {
        if (!std::isfinite(v)) throw PreconditionError("correlations: non-finite value in y");
    }
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share the mean rank of (i+1 .. j+1)
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_inputs(x, y);
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double cov = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0) {
        throw UndefinedCorrelationError("pearson: zero variance");
    }
    return cov / std::sqrt(vx * vy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    check_inputs(x, y);
    return pearson(average_ranks(x), average_ranks(y));
}

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    check_inputs(x, y);
    const std::size_t n = x.size();
    long long concordant = 0;
    long long discordant = 0;
    long long ties_x = 0;  // tied in x only
    long long ties_y = 0;  // tied in y only
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double nx = static_cast<double>(concordant + discordant + ties_x);
    const double ny = static_cast<double>(concordant + discordant + ties_y);
    if (nx == 0.0 || ny == 0.0) {
        throw UndefinedCorrelationError("kendall: all pairs tied in one vector");
    }
    return static_cast<double>(concordant - discordant) / std::sqrt(nx * ny);
}

CorrelationTriple correlations(const std::vector<double>& x, const std::vector<double>& y) {
    return {pearson(x, y), spearman(x, y), kendall_tau_b(x, y)};
}

}  // namespace orig::figeval
