// SPDX-License-Identifier: Apache-2.0
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orig/common/hashing.hpp"
#include "orig/common/strings.hpp"

namespace orig::testsupport {

std::vector<std::string> union_oracle(const std::vector<std::vector<std::string>>& batches) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& batch : batches) {
        for (const auto& h : batch) {
            if (seen.insert(h).second) out.push_back(h);
        }
    }
    return out;
}

std::vector<std::string> first_k_unique_oracle(
    const std::vector<std::string>& urls_in_rank_order,
    const std::map<std::string, std::string>& bytes_by_url, int k) {
    std::vector<std::string> out;
    std::set<std::string> seen_hashes;
    for (const auto& url : urls_in_rank_order) {
        if (static_cast<int>(out.size()) >= k) break;
        const auto it = bytes_by_url.find(url);
        if (it == bytes_by_url.end() || it->second.empty()) continue;  // dead or empty
        const auto hash = hashing::sha256_hex(it->second);
        if (seen_hashes.insert(hash).second) out.push_back(url);
    }
    return out;
}

namespace {
long long gcd_ll(long long a, long long b) {
    while (b != 0) {
        const long long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}
}  // namespace

bool fraction_equal(const Fraction& a, long long num, long long den) {
    return static_cast<__int128>(a.num) * den == static_cast<__int128>(num) * a.den;
}

Fraction counting_oracle(const std::vector<bool>& verdicts) {
    long long t = 0;
    for (const bool v : verdicts) {
        if (v) ++t;
    }
    return {t, static_cast<long long>(verdicts.size())};
}

Fraction mean_oracle(const std::vector<Fraction>& values) {
    __int128 num = 0;
    __int128 den = 1;
    for (const auto& v : values) {
        num = num * v.den + static_cast<__int128>(v.num) * den;
        den *= v.den;
        // keep magnitudes in range
        __int128 a = num < 0 ? -num : num;
        __int128 b = den;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }
    den *= static_cast<__int128>(values.size());
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return {static_cast<long long>(num), static_cast<long long>(den)};
}

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0;
    double sy = 0;
    double sxy = 0;
    double sxx = 0;
    double syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

namespace {
std::vector<double> rank_oracle(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0;
        std::size_t equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (v[j] == v[i]) ++equal;
        }
        // fractional rank: first position + (ties - 1) / 2
        ranks[i] = static_cast<double>(less + 1) + static_cast<double>(equal - 1) / 2.0;
    }
    return ranks;
}
}  // namespace

double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_oracle(rank_oracle(x), rank_oracle(y));
}

double kendall_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double concordant = 0;
    double discordant = 0;
    double n1 = 0;  // pairs tied in x
    double n2 = 0;  // pairs tied in y
    double n0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++n0;
            const bool tx = x[i] == x[j];
            const bool ty = y[i] == y[j];
            if (tx) ++n1;
            if (ty) ++n2;
            if (tx || ty) continue;
            const double s = (x[i] - x[j]) * (y[i] - y[j]);
            if (s > 0) ++concordant;
            if (s < 0) ++discordant;
        }
    }
    return (concordant - discordant) / std::sqrt((n0 - n1) * (n0 - n2));
}

namespace {

std::string base_service(const std::string& service) {
    const auto pos = service.find("!fail");
    return pos == std::string::npos ? service : service.substr(0, pos);
}

std::optional<std::string> model_role(const std::string& service) {
    if (!strings::starts_with(service, "model:")) return std::nullopt;
    return service.substr(6);
}

}  // namespace

TranscriptCheck check_transcript_order(const std::vector<gateways::CassetteEntry>& entries) {
    enum State { Boot, RoundRetrieve, RoundFilter, RoundEnd, Refine, Refined, Extended, Finished };
    State state = Boot;
    int index = 0;
    const auto fail = [&](const std::string& what) {
        return TranscriptCheck{false, "entry " + std::to_string(index) + ": unexpected " + what +
                                          " in state " + std::to_string(state)};
    };

    for (const auto& entry : entries) {
        const std::string service = base_service(entry.service);
        const auto role = model_role(service);
        const bool is_retrieval = service == gateways::service::kTextSearch ||
                                  service == gateways::service::kImageSearch ||
                                  service == gateways::service::kPageReader ||
                                  service == gateways::service::kImageFetch;

        if (role) {
            const std::string& r = *role;
            if (r == "Bootstrap") {
                if (state != Boot && state != RoundRetrieve) return fail("model:Bootstrap");
            } else if (r == "QueryPlanning") {
                if (state != Boot && state != RoundRetrieve && state != RoundFilter &&
                    state != RoundEnd) {
                    return fail("model:QueryPlanning");
                }
                state = RoundRetrieve;
            } else if (r == "TextFilter" || r == "ImageFilter") {
                if (state != RoundRetrieve && state != RoundFilter) return fail("model:" + r);
                state = RoundFilter;
            } else if (r == "Sufficiency") {
                if (state != RoundRetrieve && state != RoundFilter) return fail("model:Sufficiency");
                state = RoundEnd;
            } else if (r == "ContentRefine") {
                if (state != Boot && state != RoundRetrieve && state != RoundFilter &&
                    state != RoundEnd) {
                    return fail("model:ContentRefine");
                }
                state = Refine;
            } else if (r == "VisualRefine") {
                if (state != Refine) return fail("model:VisualRefine");
                state = Refined;
            } else if (r == "PromptExtend") {
                if (state != Refine && state != Refined) return fail("model:PromptExtend");
                state = Extended;
            } else {
                return fail("model role " + r);
            }
        } else if (is_retrieval) {
            if (state != Boot && state != RoundRetrieve) return fail(service);
        } else if (service == gateways::service::kImageGen) {
            if (state != Extended) return fail("image_gen");
            state = Finished;
        } else {
            return fail("service " + service);
        }
        ++index;
    }
    if (state != Extended && state != Finished) {
        return {false, "transcript ended before prompt extension (state " +
                           std::to_string(state) + ")"};
    }
    return {true, ""};
}

std::map<std::string, StageSums> stage_sums_oracle(
    const std::vector<gateways::CassetteEntry>& entries) {
    std::map<std::string, StageSums> sums;
    std::string stage = "bootstrap";
    for (const auto& entry : entries) {
        const std::string service = base_service(entry.service);
        const bool failed = service != entry.service;
        if (const auto role = model_role(service)) {
            if (*role == "QueryPlanning") {
                stage = "query_planning";
            } else if (*role == "TextFilter" || *role == "ImageFilter" || *role == "Sufficiency") {
                stage = "knowledge_accumulation";
            } else if (*role == "ContentRefine" || *role == "VisualRefine") {
                stage = "fine_grained_refine";
            } else if (*role == "PromptExtend") {
                stage = "prompt_extension";
            }
            if (!failed) {
                sums[stage].input_tokens += entry.tokens_in;
                sums[stage].output_tokens += entry.tokens_out;
            }
        } else if (!failed && (service == gateways::service::kTextSearch ||
                               service == gateways::service::kImageSearch)) {
            sums[stage].retrieval_calls += 1;
        }
    }
    return sums;
}

}  // namespace orig::testsupport
