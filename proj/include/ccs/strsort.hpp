#pragma once

#include <cstdint>
#include <vector>

#include "ccs/clique.hpp"
#include "ccs/objsort.hpp"

namespace ccs {

// A logical sequence of strings over alphabet [1..poly(n)], stored as one
// concatenated word array cut into per-node pieces. Characters are words;
// 0 is reserved as a sentinel and never appears in a valid set.
struct DistStringSet {
    DistWords chars;
    std::vector<uint64_t> lengths;    // per string id
    std::vector<uint64_t> start_pos;  // 1-based position of S_j[1] in the logical array

    uint64_t string_count() const { return lengths.size(); }
    uint32_t start_node(uint64_t string_id) const { return chars.locate(start_pos[string_id]).first; }
    std::vector<std::vector<uint64_t>> extract_strings() const;  // test helper
};

// Lays the strings out back to back and chops the array into n even pieces.
DistStringSet make_string_set(uint32_t n_nodes, const std::vector<std::vector<uint64_t>>& strings,
                              uint64_t max_total);

// block lengths of one string: full blocks of `block` chars, last one short
std::vector<uint64_t> split_lengths(uint64_t len, uint64_t block);

// Blocks as sortable objects, each gathered to the node holding its first
// character. ident[v][i] = (string id, block index) of objects.per_node[v][i].
struct BlockTable {
    ObjectSet objects;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> ident;
    uint64_t block_len = 0;

    explicit BlockTable(uint32_t n_nodes) : objects(n_nodes), ident(n_nodes) {}
};

BlockTable block_partition(Clique& cq, const DistStringSet& input);

// One renaming round: sorts all blocks, replaces each by its rank + 1. The
// result has the same strings shortened by a factor block_len, characters in
// [1..n^2+1], each new character stored where its block began.
DistStringSet renaming_pass(Clique& cq, const DistStringSet& input);

struct StringSortResult {
    std::vector<uint64_t> rank;         // per string id
    std::vector<uint32_t> holder;       // node that holds S_j[1] and learned rank[j]
    uint64_t passes = 0;
};

// Repeated renaming (exactly 7 passes whenever any string is longer than one
// block) followed by one object sort of the shortened strings.
StringSortResult string_sort(Clique& cq, const DistStringSet& input);

}  // namespace ccs
