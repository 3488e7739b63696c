#pragma once

#include <cstdint>
#include <vector>

namespace ccs::oracle {

// Straight-line reference implementations. Quadratic is fine; these are
// test-scale ground truth, never production paths. None of them touch the
// simulator. Inputs above 2^20 characters are rejected.

using Str = std::vector<uint64_t>;

// true iff a <= b in lexicographic order (a strict prefix sorts first)
bool lex_leq(const Str& a, const Str& b);

// distinct-smaller rank per string, aligned with the input order
std::vector<uint64_t> naive_string_sort(const std::vector<Str>& strings);

// all offsets i in [0..|Y|-|X|] with Y[i+1..i+|X|] = X (0-based offsets)
std::vector<uint64_t> naive_pm(const Str& pattern, const Str& text);

struct SaLcp {
    std::vector<uint64_t> sa;   // 1-based suffix start positions
    std::vector<uint64_t> lcp;  // lcp[i] = LCP(S[sa[i]..], S[sa[i+1]..]), size |S|-1
};

SaLcp naive_sa_lcp(const Str& s);

// min of a[i..j], 1-based inclusive
uint64_t naive_rmq(const std::vector<uint64_t>& a, uint64_t i, uint64_t j);

// true iff `cover` is a difference cover modulo t
bool dc_check(const std::vector<uint32_t>& cover, uint32_t t);

uint64_t lcp_len(const Str& a, const Str& b);

}  // namespace ccs::oracle
