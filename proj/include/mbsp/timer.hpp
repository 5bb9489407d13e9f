#pragma once

#include <chrono>

namespace mbsp {

// Monotonic wall clock with an optional deadline.
class Deadline
{
public:
    using Clock = std::chrono::steady_clock;

    explicit Deadline(double seconds) : start_(Clock::now()), limit_(seconds) {}

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
    bool expired() const { return elapsed() >= limit_; }
    double limit() const { return limit_; }

private:
    Clock::time_point start_;
    double limit_;
};

} // namespace mbsp
