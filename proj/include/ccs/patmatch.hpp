#pragma once

#include <cstdint>
#include <vector>

#include "ccs/clique.hpp"
#include "ccs/strsort.hpp"

namespace ccs {

// One arithmetic progression of occurrence offsets: start, start + diff, ...
// (count terms). Singletons carry diff 0, pairs their actual gap.
struct ApPart {
    uint64_t start = 0;
    uint64_t diff = 0;
    uint64_t count = 0;

    uint64_t last() const { return count <= 1 ? start : start + (count - 1) * diff; }
    bool operator==(const ApPart&) const = default;
};

// All occurrences of a pattern X in a string Y, window-compressed: inside
// each window of length 2|X|-1, three or more occurrences form a single
// progression whose difference is X's period. Adjacent parts that continue
// the same progression are merged.
struct OccurrenceSet {
    uint64_t x_len = 0;
    std::vector<ApPart> parts;

    std::vector<uint64_t> decompress() const;
    uint64_t count() const;
    bool operator==(const OccurrenceSet&) const = default;
};

// Compresses a sorted occurrence list. Throws CompressionViolation if three
// or more occurrences inside one window fail the progression property.
OccurrenceSet compress_occurrences(uint64_t x_len, uint64_t y_len,
                                   const std::vector<uint64_t>& occurrences);

// canonical merge-normal form of a part list (parts must be sorted, disjoint)
std::vector<ApPart> canonicalize_parts(const std::vector<ApPart>& parts);

// (set - shift) intersected with [0..max_offset], canonical
std::vector<ApPart> shift_clip_parts(const std::vector<ApPart>& parts, uint64_t shift,
                                     uint64_t max_offset);

struct Interval {
    uint64_t lo = 0;
    uint64_t hi = 0;  // inclusive, 1-based
    bool operator==(const Interval&) const = default;
};

// Uncovered locations of P and T and the maximal-region strings they induce.
struct GapDecomposition {
    std::vector<Interval> r_p;  // maximal intervals of R_P
    std::vector<Interval> r_t;
    // S_P and S_T are exactly the maximal intervals, in position order;
    // ranks are filled in by pm_long after sorting
    std::vector<uint64_t> rank_p;
    std::vector<uint64_t> rank_t;
};

// Set arithmetic over the four occurrence sets: R_X = [1..|X|] minus every
// [i+1..i+n] covered by an occurrence of the length-n prefix or suffix.
GapDecomposition uncovered_regions(const OccurrenceSet& b_in_p, const OccurrenceSet& e_in_p,
                                   const OccurrenceSet& b_in_t, const OccurrenceSet& e_in_t,
                                   uint64_t p_len, uint64_t t_len, uint64_t n);

// Pattern matching over the standard input layout: one logical array holding
// P followed by T, cut into per-node pieces.
struct PmInput {
    DistWords array;
    uint64_t p_len = 0;

    uint64_t t_len() const { return array.total() - p_len; }
};

PmInput make_pm_input(uint32_t n_nodes, const std::vector<uint64_t>& pattern,
                      const std::vector<uint64_t>& text, uint64_t max_total);

// Occurrences of array[pa..pa+p_len-1] in array[ta..ta+t_len-1], computed by
// overlap shipping plus pattern broadcast; requires p_len <= n. Returns
// 0-based offsets grouped by the node holding the first matched character.
std::vector<std::vector<uint64_t>> pm_short(Clique& cq, const DistWords& array, uint64_t pa,
                                            uint64_t p_len, uint64_t ta, uint64_t t_len);

// Long patterns: prefix/suffix anchoring plus gap-string sorting.
std::vector<std::vector<uint64_t>> pm_long(Clique& cq, const PmInput& input);

// Dispatcher per pattern length. Offsets are 0-based and cover
// [0..|T|-|P|], the alignments where a full occurrence fits; string
// positions are 1-based everywhere else, and this is the one conversion
// point.
std::vector<std::vector<uint64_t>> pm_match(Clique& cq, const PmInput& input);

std::vector<uint64_t> flatten_offsets(const std::vector<std::vector<uint64_t>>& by_node);

}  // namespace ccs
