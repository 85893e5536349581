// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "orig/common/clock.hpp"

namespace orig::gateways {

// Sliding-window limiter: at most `limit` acquisitions inside any 1-second
// window. acquire() blocks (via the wait clock) until a slot frees up.
class RateLimiter {
public:
    RateLimiter(int limit_per_second, std::shared_ptr<WaitClock> clock);

    // Returns the timestamp at which the request was admitted.
    std::int64_t acquire();

    const std::deque<std::int64_t>& admitted_log() const { return log_; }

private:
    int limit_;
    std::shared_ptr<WaitClock> clock_;
    std::mutex mu_;
    std::deque<std::int64_t> window_;
    std::deque<std::int64_t> log_;
};

// One limiter per external service, shared across concurrent pipelines.
class RateLimiterSet {
public:
    RateLimiterSet(int limit_per_second, std::shared_ptr<WaitClock> clock)
        : limit_(limit_per_second), clock_(std::move(clock)) {}

    RateLimiter& limiter_for(const std::string& service);

private:
    int limit_;
    std::shared_ptr<WaitClock> clock_;
    std::mutex mu_;
    std::map<std::string, std::unique_ptr<RateLimiter>> limiters_;
};

}  // namespace orig::gateways
