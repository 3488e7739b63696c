#pragma once

#include <cassert>
#include <cstdint>

namespace ccs {

inline uint64_t ceil_div(uint64_t a, uint64_t b) {
    assert(b > 0);
    return (a + b - 1) / b;
}

inline uint32_t ceil_log2(uint64_t x) {
    assert(x >= 1);
    uint32_t bits = 0;
    uint64_t v = 1;
    while (v < x) {
        v <<= 1;
        ++bits;
    }
    return bits;
}

// A small non-negative rational, used for the size-class exponent epsilon.
struct Frac {
    uint32_t num = 0;
    uint32_t den = 1;

    constexpr bool is_zero() const { return num == 0; }
};

namespace detail {
// Saturating integer power; anything above `cap` collapses to cap + 1.
inline uint64_t pow_capped(uint64_t base, uint32_t exp, uint64_t cap) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < exp; ++i) {
        if (r > cap / (base == 0 ? 1 : base)) return cap + 1;
        r *= base;
        if (r > cap) return cap + 1;
    }
    return r;
}
}  // namespace detail

// Exact ceil(n^(num/den)) computed with integer arithmetic: the smallest r
// with r^den >= n^num. Every fractional power in the project goes through
// this single rounding rule.
inline uint64_t ipow_ceil(uint64_t n, uint32_t num, uint32_t den) {
    assert(n >= 1 && den >= 1);
    if (num == 0) return 1;
    // target = n^num, capped well above any reachable r^den.
    const uint64_t kCap = UINT64_MAX / 2;
    uint64_t target = detail::pow_capped(n, num, kCap);
    uint64_t lo = 1, hi = n;
    // r <= n whenever num <= den; otherwise grow hi.
    while (detail::pow_capped(hi, den, kCap) < target) hi *= 2;
    while (lo < hi) {
        uint64_t mid = lo + (hi - lo) / 2;
        if (detail::pow_capped(mid, den, kCap) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

// ceil(n^eps)
inline uint64_t ipow_ceil(uint64_t n, Frac eps) { return ipow_ceil(n, eps.num, eps.den); }

// ceil(n^(1 - eps)), requires eps <= 1.
inline uint64_t ipow_ceil_one_minus(uint64_t n, Frac eps) {
    assert(eps.num <= eps.den);
    return ipow_ceil(n, eps.den - eps.num, eps.den);
}

// ceil(n^(eps/2))
inline uint64_t ipow_ceil_half(uint64_t n, Frac eps) { return ipow_ceil(n, eps.num, 2 * eps.den); }

// ceil(n^(1 - eps/2))
inline uint64_t ipow_ceil_one_minus_half(uint64_t n, Frac eps) {
    assert(eps.num <= 2 * eps.den);
    return ipow_ceil(n, 2 * eps.den - eps.num, 2 * eps.den);
}

inline uint32_t log2_log2(uint64_t n) {
    // floor(log2(log2(n))) for n >= 4; used only for recursion budgets.
    uint32_t l = ceil_log2(n);
    uint32_t ll = 0;
    while ((1u << (ll + 1)) <= l) ++ll;
    return ll;
}

}  // namespace ccs
