#include "ccs/gen.hpp"

#include <algorithm>
#include <cmath>

#include "ccs/mathutil.hpp"

namespace ccs {

namespace {
constexpr uint64_t kStreamObjects = 1;
constexpr uint64_t kStreamStrings = 2;
constexpr uint64_t kStreamPm = 3;
constexpr uint64_t kStreamSa = 4;
constexpr uint64_t kStreamNetsort = 5;

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// skips newline bytes so generated strings survive the text file format
uint64_t text_char(CounterRng& rng, uint64_t hi) {
    uint64_t d = rng.next_in(1, hi);
    if (d >= 10) ++d;
    if (d >= 13) ++d;
    return d;
}
}  // namespace

GenSizes gen_sizes(uint32_t n, uint32_t load_factor, double density) {
    GenSizes g;
    g.budget = uint64_t(density * double(load_factor) * double(n) * double(n));
    g.block = ipow_ceil(n, 1, 3);
    return g;
}

std::vector<std::vector<ObjectRecord>> gen_objects(uint32_t n, uint32_t load_factor,
                                                   double density, uint64_t seed) {
    GenSizes g = gen_sizes(n, load_factor, density);
    CounterRng rng(seed, kStreamObjects);
    const bool narrow = seed % 2 == 1;
    const uint64_t hi = narrow ? 4 : 250;
    const uint64_t per_node = std::max<uint64_t>(1, g.budget / n / 2);  // 2-word objects

    std::vector<std::vector<ObjectRecord>> out(n);
    for (uint32_t v = 0; v < n; ++v) {
        for (uint64_t i = 0; i < per_node; ++i) {
            ObjectRecord o;
            o.origin_node = v;
            o.origin_index = uint32_t(i);
            o.payload = {rng.next_in(1, hi), rng.next_in(1, hi)};
            out[v].push_back(std::move(o));
        }
    }
    return out;
}

std::vector<std::vector<uint64_t>> gen_strings(uint32_t n, uint32_t load_factor, double density,
                                               uint64_t seed) {
    GenSizes g = gen_sizes(n, load_factor, density);
    CounterRng rng(seed, kStreamStrings);
    const uint32_t variant = seed % 3;

    auto draw_char = [&](uint64_t i) -> uint64_t {
        switch (variant) {
            case 0: return text_char(rng, 248);
            case 1: return rng.next_in(1, 2);
            default: return 1 + (i % 5);  // fixed period 5
        }
    };

    std::vector<std::vector<uint64_t>> strings;
    uint64_t left = std::max<uint64_t>(g.budget, 8);

    // one long string pinned near 0.9 * block^4 keeps the renaming depth
    // identical at every n of a sweep
    uint64_t long_len = std::min<uint64_t>(left * 4 / 5, ipow(g.block, 4) * 9 / 10);
    long_len = std::max<uint64_t>(long_len, 2);
    {
        std::vector<uint64_t> s(long_len);
        for (uint64_t i = 0; i < long_len; ++i) s[i] = draw_char(i);
        strings.push_back(std::move(s));
        left -= long_len;
    }
    while (left > 0) {
        uint64_t len = std::min<uint64_t>(left, rng.next_in(1, 2 * g.block));
        std::vector<uint64_t> s(len);
        for (uint64_t i = 0; i < len; ++i) s[i] = draw_char(i);
        strings.push_back(std::move(s));
        left -= len;
    }
    return strings;
}

PmCase gen_pm(uint32_t n, uint32_t load_factor, double density, uint64_t seed) {
    GenSizes g = gen_sizes(n, load_factor, density);
    CounterRng rng(seed, kStreamPm);
    const uint32_t variant = seed % 4;
    PmCase pc;

    if (variant == 0) {  // short pattern planted in a random text
        uint64_t p_len = rng.next_in(1, n);
        uint64_t t_len = std::max<uint64_t>(g.budget > p_len ? g.budget - p_len : p_len, p_len);
        pc.pattern.resize(p_len);
        for (auto& c : pc.pattern) c = rng.next_in(1, 4);
        pc.text.resize(t_len);
        for (auto& c : pc.text) c = rng.next_in(1, 4);
        uint64_t at = rng.next_below(t_len - p_len + 1);
        std::copy(pc.pattern.begin(), pc.pattern.end(), pc.text.begin() + at);
        pc.planted.push_back(at);
        return pc;
    }

    if (variant == 2) {  // periodic pattern and text
        uint64_t period = 2;
        uint64_t p_len = 2 * n;
        uint64_t t_len = std::min<uint64_t>(4 * n, g.budget > p_len ? g.budget - p_len : p_len);
        t_len = std::max(t_len, p_len);
        pc.pattern.resize(p_len);
        pc.text.resize(t_len);
        for (uint64_t i = 0; i < p_len; ++i) pc.pattern[i] = 1 + (i % period);
        for (uint64_t i = 0; i < t_len; ++i) pc.text[i] = 1 + (i % period);
        for (uint64_t i = 0; i + p_len <= t_len; i += period) pc.planted.push_back(i);
        return pc;
    }

    // long pattern: gap length pinned to 0.9 * block^3
    uint64_t gap = std::max<uint64_t>(ipow(g.block, 3) * 9 / 10, 2);
    uint64_t p_len = 2 * n + gap;
    uint64_t alpha = 62;
    pc.pattern.resize(p_len);
    for (auto& c : pc.pattern) c = text_char(rng, alpha);

    if (variant == 1) {  // one planted copy between two uncovered gaps
        pc.text.resize(gap + p_len + gap);
        for (auto& c : pc.text) c = text_char(rng, alpha);
        std::copy(pc.pattern.begin(), pc.pattern.end(), pc.text.begin() + gap);
        pc.planted.push_back(gap);
    } else {  // no plant; matches are accidental only
        pc.text.resize(gap + p_len + gap);
        for (auto& c : pc.text) c = text_char(rng, alpha);
    }
    return pc;
}

std::vector<uint64_t> gen_sa_string(uint32_t n, uint32_t load_factor, double density,
                                    uint64_t seed) {
    GenSizes g = gen_sizes(n, load_factor, density);
    CounterRng rng(seed, kStreamSa);
    const uint32_t variant = seed % 3;
    uint64_t len = std::max<uint64_t>(2, std::min<uint64_t>(g.budget,
                                      uint64_t(load_factor) * n * n - 1));
    std::vector<uint64_t> s(len);
    for (uint64_t i = 0; i < len; ++i) {
        switch (variant) {
            case 0: s[i] = text_char(rng, 248); break;
            case 1: s[i] = rng.next_in(1, 2); break;
            default: s[i] = 1 + (i % 3); break;
        }
    }
    return s;
}

std::vector<std::vector<ObjectRecord>> gen_netsort_objects(uint32_t n, uint32_t load_factor,
                                                           double density, uint64_t seed) {
    CounterRng rng(seed, kStreamNetsort);
    const uint64_t words = std::max<uint64_t>(1, uint64_t(density * double(load_factor) * n));
    std::vector<std::vector<ObjectRecord>> out(n);
    for (uint32_t v = 0; v < n; ++v) {
        ObjectRecord o;
        o.origin_node = v;
        o.origin_index = 0;
        o.payload.resize(words);
        for (auto& w : o.payload) w = rng.next_in(1, 250);
        out[v].push_back(std::move(o));
    }
    return out;
}

}  // namespace ccs
