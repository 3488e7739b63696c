#pragma once

#include <cstdint>

namespace ccs {

// Counter-based deterministic generator (splitmix64 finalizer over a
// key/stream/counter triple). Every random value in the project is a pure
// function of (seed, stream, counter); there is no global RNG state.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream)) {}

    uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    // uniform in [0, bound)
    uint64_t next_below(uint64_t bound) {
        if (bound <= 1) return 0;
        // rejection-free: bias is negligible for bound << 2^64 and keeps the
        // stream cross-language reproducible (single draw per value).
        return next() % bound;
    }

    // uniform in [lo, hi] inclusive
    uint64_t next_in(uint64_t lo, uint64_t hi) { return lo + next_below(hi - lo + 1); }

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace ccs
