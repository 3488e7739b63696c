#pragma once

#include <cstdint>
#include <stdexcept>

#include "ccs/mathutil.hpp"

namespace ccs {

enum class RoutingBackend : uint8_t { abstract, explicit_matching };

// Every hidden constant behind an O(.) bound in the model lives here.
//   c_w : a word must fit in c_w * ceil(log2 n) bits
//   c_L : "O(n) words" means at most c_L * n words
//   c_m : words per ordered node pair per raw round
//   c_a : at most c_a * n auxiliary nodes may be alive at once
struct SimConfig {
    uint32_t n_nodes = 0;
    uint32_t word_bits_factor = 4;       // c_w
    uint32_t load_factor = 8;            // c_L
    uint32_t words_per_pair = 1;         // c_m
    uint32_t aux_factor = 4;             // c_a
    RoutingBackend backend = RoutingBackend::abstract;
    uint64_t seed = 0;

    void validate() const {
        if (n_nodes < 2) throw std::invalid_argument("SimConfig: n_nodes must be >= 2");
        if (word_bits_factor < 1 || load_factor < 1 || words_per_pair < 1 || aux_factor < 1)
            throw std::invalid_argument("SimConfig: all factors must be >= 1");
    }

    uint64_t word_limit() const {
        uint64_t bits = uint64_t(word_bits_factor) * ceil_log2(n_nodes);
        if (bits >= 64) return UINT64_MAX;
        return (uint64_t(1) << bits) - 1;
    }

    // per-invocation per-node load budget, in words
    uint64_t load_limit() const { return uint64_t(load_factor) * n_nodes; }

    uint64_t aux_limit() const { return uint64_t(aux_factor) * n_nodes; }
};

}  // namespace ccs
