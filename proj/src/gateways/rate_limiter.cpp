// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/rate_limiter.hpp"

#include "orig/common/error.hpp"

namespace orig::gateways {

RateLimiter::RateLimiter(int limit_per_second, std::shared_ptr<WaitClock> clock)
    : limit_(limit_per_second), clock_(std::move(clock)) {
    if (limit_ < 1) throw PreconditionError("rate limit must be >= 1 per second");
}

std::int64_t RateLimiter::acquire() {
    std::lock_guard lock(mu_);
    auto now = clock_->now_ms();
    while (true) {
        while (!window_.empty() && window_.front() <= now - 1000) window_.pop_front();
        if (static_cast<int>(window_.size()) < limit_) break;
        const auto wait = window_.front() + 1000 - now;
        clock_->sleep_ms(wait > 0 ? wait : 1);
        now = clock_->now_ms();
    }
    window_.push_back(now);
    log_.push_back(now);
    return now;
}

RateLimiter& RateLimiterSet::limiter_for(const std::string& service) {
    std::lock_guard lock(mu_);
    auto& slot = limiters_[service];
    if (!slot) slot = std::make_unique<RateLimiter>(limit_, clock_);
    return *slot;
}

}  // namespace orig::gateways
