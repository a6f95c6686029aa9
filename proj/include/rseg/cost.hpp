#pragma once

#include <chrono>
#include <cstdint>

namespace rseg {

enum class TimingMode { WallClock, DeterministicCost };

/// Accumulates per-pixel update operations so runs can be timed
/// machine-independently.
class CostCounter {
public:
    void add(uint64_t n) { total_ += n; }
    uint64_t total() const { return total_; }
    void reset() { total_ = 0; }

private:
    uint64_t total_ = 0;
};

/// Times a span either in wall-clock seconds or in deterministic cost units.
class RunTimer {
public:
    explicit RunTimer(TimingMode mode) : mode_(mode) {
        if (mode_ == TimingMode::WallClock)
            start_ = std::chrono::steady_clock::now();
    }

    CostCounter& cost() { return cost_; }

    /// Elapsed span; always > 0.
    double stop() const {
        if (mode_ == TimingMode::WallClock) {
            const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
            return d.count() > 1e-9 ? d.count() : 1e-9;
        }
        return cost_.total() > 0 ? static_cast<double>(cost_.total()) : 1.0;
    }

private:
    TimingMode mode_;
    std::chrono::steady_clock::time_point start_;
    CostCounter cost_;
};

}  // namespace rseg
