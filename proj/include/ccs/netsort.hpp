#pragma once

#include <cstdint>
#include <vector>

#include "ccs/clique.hpp"
#include "ccs/objsort.hpp"

namespace ccs {

// Comparator (low, high): after execution the smaller object sits on wire
// `low`. Wires within a level are disjoint.
struct Comparator {
    uint32_t low = 0;
    uint32_t high = 0;
};

struct SortingNetwork {
    uint32_t wires = 0;
    std::vector<std::vector<Comparator>> levels;

    uint32_t depth() const { return uint32_t(levels.size()); }
    uint64_t comparator_count() const;

    // applies the network to a vector of keys (test helper)
    template <typename T>
    void apply(std::vector<T>& keys) const {
        for (const auto& level : levels)
            for (const Comparator& c : level)
                if (keys[c.high] < keys[c.low]) std::swap(keys[c.low], keys[c.high]);
    }
};

// Batcher bitonic network for `wires` inputs, padded internally to a power
// of two. Depth is exactly log2(N) * (log2(N) + 1) / 2 for powers of two.
SortingNetwork build_network(uint32_t wires);

// Sorts Theta(n)-word objects (one per wire) by simulating the network level
// by level; returns distinct-smaller ranks aligned with the original
// per-node object lists. Counts every executed comparator on the ledger.
std::vector<std::vector<uint64_t>> network_sort(Clique& cq, ObjectSet objects,
                                                PayloadOrder order = PayloadOrder::lex_prefix);

}  // namespace ccs
