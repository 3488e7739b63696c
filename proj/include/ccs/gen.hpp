#pragma once

#include <cstdint>
#include <vector>

#include "ccs/objsort.hpp"
#include "ccs/rng.hpp"

namespace ccs {

// Deterministic input generators. Everything is a pure function of
// (n, load_factor, density, seed); the seed also selects the generator
// variant where several exist. Sizes are pinned to powers of the block
// length so that runs at the same density behave identically across n.

struct GenSizes {
    uint64_t budget = 0;  // floor(density * c_L * n^2) payload words
    uint64_t block = 0;   // ceil(n^(1/3))
};

GenSizes gen_sizes(uint32_t n, uint32_t load_factor, double density);

// uniform 2-word objects, one list per node; seed parity narrows the value
// range to force duplicate payloads
std::vector<std::vector<ObjectRecord>> gen_objects(uint32_t n, uint32_t load_factor,
                                                   double density, uint64_t seed);

// string set: one long string pinned near 0.9 * block^4 plus short filler
// strings; variants: wide alphabet, binary (prefix stress), periodic
std::vector<std::vector<uint64_t>> gen_strings(uint32_t n, uint32_t load_factor, double density,
                                               uint64_t seed);

struct PmCase {
    std::vector<uint64_t> pattern;
    std::vector<uint64_t> text;
    std::vector<uint64_t> planted;  // offsets guaranteed to match (may be empty)
};

// variants by seed % 4: short pattern, long planted, periodic, long random
PmCase gen_pm(uint32_t n, uint32_t load_factor, double density, uint64_t seed);

// single string for suffix array runs; variants: wide, binary, periodic
std::vector<uint64_t> gen_sa_string(uint32_t n, uint32_t load_factor, double density,
                                    uint64_t seed);

// one Theta(n)-word key per node for the network sorter
std::vector<std::vector<ObjectRecord>> gen_netsort_objects(uint32_t n, uint32_t load_factor,
                                                           double density, uint64_t seed);

}  // namespace ccs
