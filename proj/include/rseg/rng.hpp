#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rseg {

/// Seedable generator with named substreams so that sampling, fold
/// shuffling, corpus generation, etc. reproduce independently of each other
/// and of thread scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {}

    /// A generator for (stream, index), e.g. stream("folds", repeat).
    std::mt19937_64 stream(std::string_view name, uint64_t index = 0) const {
        uint64_t h = seed_;
        for (const char c : name) h = splitmix(h ^ static_cast<uint64_t>(c));
        return std::mt19937_64(splitmix(h ^ index));
    }

    uint64_t seed() const { return seed_; }

private:
    static uint64_t splitmix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    uint64_t seed_;
};

/// Uniform in [0, 1); uses a fixed 53-bit mapping so results do not depend
/// on the standard library's distribution implementation.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n); rejection-free modulo is fine at these sizes.
inline uint64_t uniform_index(std::mt19937_64& g, uint64_t n) {
    return g() % n;
}

}  // namespace rseg
