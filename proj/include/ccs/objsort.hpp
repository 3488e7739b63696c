#pragma once

#include <cstdint>
#include <vector>

#include "ccs/clique.hpp"
#include "ccs/mathutil.hpp"

namespace ccs {

// A sortable object: a payload of words plus its origin, which breaks ties
// between equal payloads.
struct ObjectRecord {
    std::vector<uint64_t> payload;
    uint32_t origin_node = 0;
    uint32_t origin_index = 0;
};

// Payload orders used across the project. `lex_prefix` is lexicographic with
// a strict prefix sorting first. `window_rank` compares two halves: the
// character window lexicographically, then the first sampled-rank slot both
// objects carry (slot value 0 marks "not sampled"); it requires equal-length
// payloads of even length.
enum class PayloadOrder : uint8_t { lex_prefix, window_rank };

// -1 if a < b, 0 if equal, +1 if a > b
int compare_payloads(PayloadOrder order, const std::vector<uint64_t>& a,
                     const std::vector<uint64_t>& b);

// full order: payload, then (origin_node, origin_index)
bool object_less(PayloadOrder order, const ObjectRecord& a, const ObjectRecord& b);

// Consecutive index sets I_1..I_k covering [0..sizes.size()), each with sum
// at most X/k + x_max.
struct PartitionSpec {
    std::vector<uint64_t> boundaries;  // k+1 entries; set j = [b[j], b[j+1])

    uint64_t set_of(uint64_t element) const;  // which set an element index falls in
    uint64_t set_count() const { return boundaries.size() - 1; }
};

// Greedy split of `sizes` into exactly k consecutive sets: a set is closed
// as soon as its sum reaches X/k. Requires every size <= x_max.
PartitionSpec greedy_partition(const std::vector<uint64_t>& sizes, uint64_t k, uint64_t x_max);

// objects per node, indexed by node id over the whole clique
struct ObjectSet {
    std::vector<std::vector<ObjectRecord>> per_node;

    explicit ObjectSet(uint32_t n_nodes) : per_node(n_nodes) {}
    uint64_t total_objects() const;
    uint64_t total_words() const;
};

struct NodeRange {
    uint32_t lo = 0;
    uint32_t hi = 0;  // exclusive
    uint32_t size() const { return hi - lo; }
};

// Sorts and redistributes the objects held by the nodes of `range` so that
// all objects on node i precede all objects on node j for i < j, with each
// node locally sorted. Objects must each live wholly on one node.
void sort_group(Clique& cq, ObjectSet& objects, NodeRange range, Frac eps, PayloadOrder order);

// After sort_group over all nodes: delivers rank(B) (distinct-smaller
// semantics) to each object's origin node. Result is aligned with the
// original per-node object lists: ranks[v][i] is the rank of the object
// originally submitted as (v, i). `original_counts[v]` is that list's size.
std::vector<std::vector<uint64_t>> assign_ranks(Clique& cq, const ObjectSet& sorted,
                                                PayloadOrder order,
                                                const std::vector<uint64_t>& original_counts);

// Whole pipeline for epsilon > 0: size-class validation, sort_group over all
// nodes, rank assignment. For epsilon = 0 callers use netsort::network_sort.
std::vector<std::vector<uint64_t>> solve_object_sort(Clique& cq, ObjectSet objects, Frac eps,
                                                     PayloadOrder order = PayloadOrder::lex_prefix);

// packed origin word helpers (origin rides in one word next to the payload)
uint64_t pack_origin(const Clique& cq, uint32_t node, uint64_t index);
std::pair<uint32_t, uint64_t> unpack_origin(const Clique& cq, uint64_t word);

// wire format of a shipped object: [packed origin, payload...]
std::vector<uint64_t> object_to_words(const Clique& cq, const ObjectRecord& o);
ObjectRecord object_from_words(const Clique& cq, const std::vector<uint64_t>& words);

}  // namespace ccs
