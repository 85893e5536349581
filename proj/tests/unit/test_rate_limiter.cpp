// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "orig/gateways/rate_limiter.hpp"

using namespace orig;
using namespace orig::gateways;

TEST_CASE("sliding one-second window never exceeds the limit") {
    auto clock = std::make_shared<VirtualWaitClock>();
    const int limit = 3;
    RateLimiter limiter(limit, clock);

    for (int i = 0; i < 20; ++i) limiter.acquire();

    const auto& log = limiter.admitted_log();
    REQUIRE(log.size() == 20);
    for (std::size_t i = 0; i < log.size(); ++i) {
        int in_window = 0;
        for (std::size_t j = 0; j <= i; ++j) {
            if (log[j] > log[i] - 1000 && log[j] <= log[i]) ++in_window;
        }
        CHECK(in_window <= limit);
        if (i > 0) CHECK(log[i] >= log[i - 1]);  // monotone admission
    }
    // admitting 20 at 3/s must have advanced virtual time past 5 seconds
    CHECK(clock->now_ms() >= 5000);
}

TEST_CASE("burst below the limit is admitted without waiting") {
    auto clock = std::make_shared<VirtualWaitClock>();
    RateLimiter limiter(5, clock);
    for (int i = 0; i < 5; ++i) limiter.acquire();
    CHECK(clock->now_ms() == 0);
}

TEST_CASE("limiter set hands out one limiter per service") {
    auto clock = std::make_shared<VirtualWaitClock>();
    RateLimiterSet set(2, clock);
    auto& a = set.limiter_for("search_text");
    auto& b = set.limiter_for("model");
    CHECK(&a == &set.limiter_for("search_text"));
    CHECK(&a != &b);
    CHECK_THROWS_AS(RateLimiter(0, clock), PreconditionError);
}
