// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

namespace orig {

// Source of timestamps for evidence records, exchange latency and per-stage
// timing. Runs operating against a cassette (record or replay) use the
// logical source so artifacts are byte-identical across executions.
class TimeSource {
public:
    virtual ~TimeSource() = default;
    virtual std::int64_t now_ms() = 0;
    virtual bool is_logical() const = 0;
};

class SystemTimeSource final : public TimeSource {
public:
    std::int64_t now_ms() override;
    bool is_logical() const override { return false; }
};

// Starts at a fixed epoch and advances a fixed step on every query. The
// sequence of timestamps depends only on the sequence of calls.
class LogicalTimeSource final : public TimeSource {
public:
    explicit LogicalTimeSource(std::int64_t epoch_ms = kDefaultEpochMs, std::int64_t step_ms = 1000)
        : next_(epoch_ms), step_(step_ms) {}

    std::int64_t now_ms() override {
        std::lock_guard lock(mu_);
        const auto t = next_;
        next_ += step_;
        return t;
    }
    bool is_logical() const override { return true; }

    // checkpoint/restore support: the next timestamp to be handed out
    std::int64_t peek_ms() {
        std::lock_guard lock(mu_);
        return next_;
    }
    void set_next(std::int64_t next) {
        std::lock_guard lock(mu_);
        next_ = next;
    }

    // 2020-01-01T00:00:00Z
    static constexpr std::int64_t kDefaultEpochMs = 1577836800000;

private:
    std::mutex mu_;
    std::int64_t next_;
    std::int64_t step_;
};

std::string format_utc(std::int64_t unix_ms);

// Waitable clock used by the rate limiter; the virtual variant advances
// instantly so sliding-window behavior is testable without real sleeps.
class WaitClock {
public:
    virtual ~WaitClock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_ms(std::int64_t ms) = 0;
};

class SteadyWaitClock final : public WaitClock {
public:
    std::int64_t now_ms() override;
    void sleep_ms(std::int64_t ms) override;
};

class VirtualWaitClock final : public WaitClock {
public:
    std::int64_t now_ms() override {
        std::lock_guard lock(mu_);
        return now_;
    }
    void sleep_ms(std::int64_t ms) override {
        std::lock_guard lock(mu_);
        now_ += ms;
    }

private:
    std::mutex mu_;
    std::int64_t now_ = 0;
};

}  // namespace orig
