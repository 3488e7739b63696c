#pragma once

#include <cstdint>
#include <vector>

#include "ccs/clique.hpp"
#include "ccs/mathutil.hpp"

namespace ccs {

struct DifferenceCover {
    uint32_t t = 1;
    std::vector<uint32_t> members;  // sorted subset of [0..t-1]
};

// {0..r-1} union {0, r, 2r, .., r*r} intersected with [0..t-1], r = ceil(sqrt t).
// Size at most 2*ceil(sqrt t) + 1; the cover property holds for every t >= 1.
DifferenceCover build_dc(uint32_t t);

// Arithmetic description of the sample string layout: S' is the
// concatenation, in ascending cover-member order, of the rank streams
// S^(i) = rank(S_i) rank(S_{i+t}) ... with one 0 delimiter between streams.
struct SampleMap {
    uint32_t t = 1;
    std::vector<uint32_t> cover;
    uint64_t s_len = 0;

    std::vector<uint64_t> class_count;   // positions per cover member
    std::vector<uint64_t> class_start;   // 1-based start of each stream in S'
    uint64_t sprime_len = 0;

    void init(const DifferenceCover& dc, uint64_t len);
    bool sampled(uint64_t pos) const;        // pos in DC_t(S)?
    uint64_t f(uint64_t pos) const;          // sampled position -> S' position
    uint64_t f_inverse(uint64_t sp) const;   // S' position -> sampled position (0: delimiter)
    uint64_t sample_count() const;           // |DC_t(S)|
    uint64_t delimiter_count() const { return cover.size() - 1; }
};

struct SampleString {
    DistWords s_prime;  // characters are rank+1; delimiters are 0
    SampleMap map;
};

// Sorts the t-length windows at all sampled positions (0-padded past the
// end) and assembles the sample string.
SampleString build_sample_string(Clique& cq, const DistWords& s, const DifferenceCover& dc);

// Representative object payload layout: [t window chars][t rank slots],
// where slot j holds ISA_{S'}[f(i+j)] for sampled i+j and 0 otherwise.
// Comparison: window order first, then the first slot both objects carry.
std::vector<uint64_t> make_rep_payload(const std::vector<uint64_t>& window,
                                       const std::vector<uint64_t>& rank_slots);

// -1 / 0 / +1 per the representative-object order; throws NoWitness if the
// windows are equal but no common sampled slot exists.
int rep_compare(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

struct SaLcpResult {
    DistWords sa;   // chop layout over [1..|S|]
    DistWords lcp;  // chop layout over [1..|S|-1]; filled by the LCP stage
    DistWords isa;  // same piece layout as the input string

    std::vector<uint64_t> sa_flat() const { return sa.flatten(); }
    std::vector<uint64_t> lcp_flat() const { return lcp.flatten(); }
    std::vector<uint64_t> isa_flat() const { return isa.flatten(); }
};

// Per-level snapshot for invariant tests.
struct SaTraceLevel {
    uint64_t s_len = 0;
    uint32_t t = 0;
    std::vector<uint32_t> cover;
    std::vector<uint64_t> s_chars;       // working string of this level
    std::vector<uint64_t> sprime_chars;  // sample string passed down
    std::vector<uint64_t> sampled_positions;
    std::vector<uint64_t> lcpbar;        // exact sampled-suffix LCPs (LCP stage only)
    bool base_case = false;
};

struct SaTrace {
    std::vector<SaTraceLevel> levels;
};

// Suffix array construction (SA and ISA; the lcp field stays empty).
SaLcpResult suffix_array(Clique& cq, const DistWords& s, SaTrace* trace = nullptr);

// Full pipeline: SA, ISA and the LCP array, computed level by level.
SaLcpResult sa_and_lcp(Clique& cq, const DistWords& s, SaTrace* trace = nullptr);

// LCP stage per the module contract; recomputes the levels and verifies the
// provided SA if one is given.
SaLcpResult lcp_arrays(Clique& cq, const DistWords& s, const SaLcpResult* sa_state = nullptr);

// recursion depth budget: 4 * log2(log2 n) + 8
uint32_t sa_depth_budget(uint32_t n_nodes);

}  // namespace ccs
