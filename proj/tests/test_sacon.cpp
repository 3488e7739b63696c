#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/oracle.hpp"
#include "ccs/rng.hpp"
#include "ccs/sacon.hpp"

using namespace ccs;

namespace {

SimConfig cfg_n(uint32_t n) {
    SimConfig c;
    c.n_nodes = n;
    return c;
}

std::vector<uint64_t> str(const char* s) {
    std::vector<uint64_t> out;
    for (const char* p = s; *p; ++p) out.push_back(uint64_t(uint8_t(*p)));
    return out;
}

std::vector<uint64_t> random_string(uint64_t len, uint64_t alpha, uint64_t seed) {
    CounterRng rng(seed, 61);
    std::vector<uint64_t> s(len);
    for (auto& c : s) c = rng.next_in(1, alpha);
    return s;
}

// suffix of s (1-based start), padded conceptually with nothing: plain slice
std::vector<uint64_t> suffix(const std::vector<uint64_t>& s, uint64_t pos) {
    return std::vector<uint64_t>(s.begin() + pos - 1, s.end());
}

}  // namespace

TEST_CASE("build_dc fixtures and cover property") {
    CHECK(build_dc(1).members == std::vector<uint32_t>{0});
    CHECK(build_dc(4).members == std::vector<uint32_t>{0, 1, 2});
    CHECK(build_dc(9).members == std::vector<uint32_t>{0, 1, 2, 3, 6});

    for (uint32_t t = 1; t <= 256; ++t) {
        DifferenceCover dc = build_dc(t);
        CHECK(oracle::dc_check(dc.members, t));
        uint32_t r = 1;
        while (r * r < t) ++r;
        CHECK(dc.members.size() <= 2 * size_t(r) + 1);
    }
}

TEST_CASE("difference cover gives a common witness for every position pair") {
    for (uint32_t t : {4u, 7u, 9u, 16u, 25u}) {
        DifferenceCover dc = build_dc(t);
        auto in_cover = [&](uint64_t pos) {
            return std::binary_search(dc.members.begin(), dc.members.end(), uint32_t(pos % t));
        };
        for (uint64_t i = 1; i <= 3 * t; ++i)
            for (uint64_t j = 1; j <= 3 * t; ++j) {
                bool found = false;
                for (uint64_t k = 0; k < t && !found; ++k)
                    found = in_cover(i + k) && in_cover(j + k);
                CHECK(found);
            }
    }
}

TEST_CASE("sample map: banana fixture with the hand cover {0,1}") {
    DifferenceCover dc;
    dc.t = 3;
    dc.members = {0, 1};
    REQUIRE(oracle::dc_check(dc.members, 3));

    SampleMap map;
    map.init(dc, 6);
    std::vector<uint64_t> sampled;
    for (uint64_t p = 1; p <= 6; ++p)
        if (map.sampled(p)) sampled.push_back(p);
    CHECK(sampled == std::vector<uint64_t>{1, 3, 4, 6});
    CHECK(map.sprime_len == 5);  // 4 ranks + 1 delimiter
    CHECK(map.f(3) == 1);
    CHECK(map.f(6) == 2);
    CHECK(map.f(1) == 4);
    CHECK(map.f(4) == 5);
    CHECK(map.f_inverse(3) == 0);  // the delimiter slot
    for (uint64_t p : sampled) CHECK(map.f_inverse(map.f(p)) == p);
}

TEST_CASE("build_sample_string: banana structure matches the hand construction") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    DifferenceCover dc;
    dc.t = 3;
    dc.members = {0, 1};
    DistWords s = DistWords::chop(str("banana"), n);
    SampleString sample = build_sample_string(cq, s, dc);
    // windows: ban nan ana a.. -> sorted a.. < ana < ban < nan
    // S^(0) = rank(S_3)+1 rank(S_6)+1 = 4 1 ; S^(1) = rank(S_1)+1 rank(S_4)+1 = 3 2
    CHECK(sample.s_prime.flatten() == std::vector<uint64_t>{4, 1, 0, 3, 2});
}

TEST_CASE("build_sample_string: equal windows share a rank") {
    const uint32_t n = 8;
    Clique cq(cfg_n(n));
    DistWords s = DistWords::chop(std::vector<uint64_t>(8, 1), n);
    DifferenceCover dc = build_dc(4);
    SampleString sample = build_sample_string(cq, s, dc);
    auto flat = sample.s_prime.flatten();
    // full windows at positions 1, 2, 4, 5 are all (1,1,1,1): equal ranks
    uint64_t r1 = flat[sample.map.f(1) - 1];
    CHECK(flat[sample.map.f(2) - 1] == r1);
    CHECK(flat[sample.map.f(4) - 1] == r1);
    CHECK(flat[sample.map.f(5) - 1] == r1);
    // padded windows at 6 and 8 rank strictly below, shortest first
    CHECK(flat[sample.map.f(8) - 1] < flat[sample.map.f(6) - 1]);
    CHECK(flat[sample.map.f(6) - 1] < r1);
}

TEST_CASE("rep_compare: windows decide, then sampled slots") {
    // windows differ at the first character
    CHECK(rep_compare({1, 2, 0, 0}, {2, 2, 0, 0}) < 0);
    // equal windows, first common slot decides
    CHECK(rep_compare({5, 5, 3, 0}, {5, 5, 7, 0}) < 0);
    CHECK(rep_compare({5, 5, 0, 4}, {5, 5, 0, 9}) < 0);
    // same object
    CHECK(rep_compare({5, 5, 3, 1}, {5, 5, 3, 1}) == 0);
    // no common slot
    CHECK_THROWS_AS(rep_compare({5, 5, 3, 0}, {5, 5, 0, 2}), NoWitness);
}

TEST_CASE("rep_compare agrees with naive suffix comparison on random pairs") {
    // representative objects built from an oracle-ranked sample string
    const uint32_t n = 16;
    CounterRng rng(13, 63);
    int checked = 0;
    while (checked < 100) {
        std::vector<uint64_t> s = random_string(60, 2, rng.next());
        const uint32_t t = 4;
        DifferenceCover dc = build_dc(t);
        Clique cq(cfg_n(n));
        SampleString sample = build_sample_string(cq, DistWords::chop(s, n), dc);
        auto sp = sample.s_prime.flatten();
        auto isa_sp = oracle::naive_sa_lcp(sp);
        std::vector<uint64_t> rank_of(sp.size() + 1, 0);
        for (size_t k = 0; k < isa_sp.sa.size(); ++k) rank_of[isa_sp.sa[k]] = k + 1;

        auto rep_of = [&](uint64_t pos) {
            std::vector<uint64_t> window(t, 0), slots(t, 0);
            for (uint64_t j = 0; j < t; ++j) {
                if (pos + j <= s.size()) window[j] = s[pos + j - 1];
                if (pos + j <= s.size() && sample.map.sampled(pos + j))
                    slots[j] = rank_of[sample.map.f(pos + j)];
            }
            return make_rep_payload(window, slots);
        };
        uint64_t a = rng.next_in(1, s.size());
        uint64_t b = rng.next_in(1, s.size());
        if (a == b) continue;
        int got = rep_compare(rep_of(a), rep_of(b));
        auto sa_ = suffix(s, a), sb = suffix(s, b);
        int expect = sa_ == sb ? 0 : (oracle::lex_leq(sa_, sb) ? -1 : 1);
        CHECK(got == expect);
        ++checked;
    }
}

TEST_CASE("suffix_array handles one- and two-character strings") {
    Clique cq(cfg_n(8));
    auto one = sa_and_lcp(cq, DistWords::chop({5}, 8));
    CHECK(one.sa_flat() == std::vector<uint64_t>{1});
    CHECK(one.lcp_flat().empty());
    auto two = sa_and_lcp(cq, DistWords::chop({7, 7}, 8));
    CHECK(two.sa_flat() == std::vector<uint64_t>{2, 1});
    CHECK(two.lcp_flat() == std::vector<uint64_t>{1});
}

TEST_CASE("suffix_array fixtures") {
    const uint32_t n = 8;
    {
        Clique cq(cfg_n(n));
        auto res = suffix_array(cq, DistWords::chop(str("banana"), n));
        CHECK(res.sa_flat() == std::vector<uint64_t>{6, 4, 2, 1, 5, 3});
    }
    {
        Clique cq(cfg_n(n));
        auto res = suffix_array(cq, DistWords::chop(str("aaa"), n));
        CHECK(res.sa_flat() == std::vector<uint64_t>{3, 2, 1});
    }
}

TEST_CASE("sa_and_lcp fixtures") {
    const uint32_t n = 8;
    {
        Clique cq(cfg_n(n));
        auto res = sa_and_lcp(cq, DistWords::chop(str("banana"), n));
        CHECK(res.sa_flat() == std::vector<uint64_t>{6, 4, 2, 1, 5, 3});
        CHECK(res.lcp_flat() == std::vector<uint64_t>{1, 3, 0, 0, 2});
    }
    {
        Clique cq(cfg_n(n));
        auto res = sa_and_lcp(cq, DistWords::chop(str("abc"), n));
        CHECK(res.lcp_flat() == std::vector<uint64_t>{0, 0});
    }
}

TEST_CASE("suffix array matches the oracle beyond the base case") {
    for (uint64_t seed : {1, 2, 3}) {
        const uint32_t n = 32;  // base threshold c_L*n = 256
        for (uint64_t len : {280, 300, 320}) {
            Clique cq(cfg_n(n));
            auto s = random_string(len, seed == 2 ? 2 : 150, seed);
            auto res = sa_and_lcp(cq, DistWords::chop(s, n));
            auto ref = oracle::naive_sa_lcp(s);
            CHECK(res.sa_flat() == ref.sa);
            CHECK(res.lcp_flat() == ref.lcp);
            // ISA is the inverse permutation
            auto isa = res.isa_flat();
            for (uint64_t k = 0; k < len; ++k) CHECK(isa[res.sa_flat()[k] - 1] == k + 1);
        }
    }
}

TEST_CASE("recursion levels satisfy the sampling invariants") {
    const uint32_t n = 32;
    Clique cq(cfg_n(n));
    auto s = random_string(320, 3, 17);
    SaTrace trace;
    auto res = sa_and_lcp(cq, DistWords::chop(s, n), &trace);
    auto ref = oracle::naive_sa_lcp(s);
    REQUIRE(res.sa_flat() == ref.sa);
    REQUIRE(trace.levels.size() >= 2);

    CounterRng rng(5, 62);
    for (const SaTraceLevel& lvl : trace.levels) {
        if (lvl.base_case) continue;
        REQUIRE(!lvl.sampled_positions.empty());
        SampleMap map;
        DifferenceCover dc;
        dc.t = lvl.t;
        dc.members = lvl.cover;
        map.init(dc, lvl.s_len);

        // order preservation: suffix order in S agrees with suffix order in
        // S' at the mapped positions (sampled pairs)
        for (int it = 0; it < 50; ++it) {
            uint64_t a = lvl.sampled_positions[rng.next_below(lvl.sampled_positions.size())];
            uint64_t b = lvl.sampled_positions[rng.next_below(lvl.sampled_positions.size())];
            if (a == b) continue;
            bool s_order = oracle::lex_leq(suffix(lvl.s_chars, a), suffix(lvl.s_chars, b));
            bool sp_order = oracle::lex_leq(suffix(lvl.sprime_chars, map.f(a)),
                                            suffix(lvl.sprime_chars, map.f(b)));
            CHECK(s_order == sp_order);
        }

        // scaled LCP: LCP in S' equals floor(LCP in S / t) for sampled pairs
        for (int it = 0; it < 50; ++it) {
            uint64_t a = lvl.sampled_positions[rng.next_below(lvl.sampled_positions.size())];
            uint64_t b = lvl.sampled_positions[rng.next_below(lvl.sampled_positions.size())];
            if (a == b) continue;
            uint64_t lcp_s = oracle::lcp_len(suffix(lvl.s_chars, a), suffix(lvl.s_chars, b));
            uint64_t lcp_sp = oracle::lcp_len(suffix(lvl.sprime_chars, map.f(a)),
                                              suffix(lvl.sprime_chars, map.f(b)));
            CHECK(lcp_sp == lcp_s / lvl.t);
        }

        // the recorded exact sampled LCPs are correct
        if (!lvl.lcpbar.empty()) {
            std::vector<std::pair<std::vector<uint64_t>, uint64_t>> sorted_samples;
            for (uint64_t p : lvl.sampled_positions)
                sorted_samples.push_back({suffix(lvl.s_chars, p), p});
            std::sort(sorted_samples.begin(), sorted_samples.end(),
                      [](const auto& x, const auto& y) {
                          return x.first != y.first ? oracle::lex_leq(x.first, y.first)
                                                    : x.second < y.second;
                      });
            REQUIRE(lvl.lcpbar.size() == sorted_samples.size() - 1);
            for (size_t r = 0; r + 1 < sorted_samples.size(); ++r)
                CHECK(lvl.lcpbar[r] == oracle::lcp_len(sorted_samples[r].first,
                                                       sorted_samples[r + 1].first));
        }
    }
}

TEST_CASE("rep objects order suffixes like the oracle") {
    const uint32_t n = 32;
    Clique cq(cfg_n(n));
    auto s = random_string(300, 2, 23);
    auto res = suffix_array(cq, DistWords::chop(s, n));
    auto ref = oracle::naive_sa_lcp(s);
    CHECK(res.sa_flat() == ref.sa);
}

TEST_CASE("recursion depth stays within the budget") {
    const uint32_t n = 64;
    CHECK(sa_depth_budget(16) == 4 * 2 + 8);
    CHECK(sa_depth_budget(256) == 4 * 3 + 8);
    Clique cq(cfg_n(n));
    SaTrace trace;
    auto s = random_string(1400, 4, 29);
    auto res = sa_and_lcp(cq, DistWords::chop(s, n), &trace);
    CHECK(trace.levels.size() > 2);  // actually recursed
    CHECK(trace.levels.size() <= sa_depth_budget(n));
    auto ref = oracle::naive_sa_lcp(s);
    CHECK(res.sa_flat() == ref.sa);
    CHECK(res.lcp_flat() == ref.lcp);
}

TEST_CASE("character 0 is rejected at the interface") {
    Clique cq(cfg_n(8));
    CHECK_THROWS_AS(suffix_array(cq, DistWords::chop({1, 0, 2}, 8)), SimError);
}

TEST_CASE("lcp_arrays cross-checks a provided suffix array") {
    const uint32_t n = 32;
    auto s = random_string(300, 3, 31);
    Clique cq1(cfg_n(n));
    auto sa_only = suffix_array(cq1, DistWords::chop(s, n));
    Clique cq2(cfg_n(n));
    auto full = lcp_arrays(cq2, DistWords::chop(s, n), &sa_only);
    auto ref = oracle::naive_sa_lcp(s);
    CHECK(full.lcp_flat() == ref.lcp);

    SaLcpResult bogus = sa_only;
    bogus.sa.piece[0][0] ^= 1;
    Clique cq3(cfg_n(n));
    CHECK_THROWS_AS(lcp_arrays(cq3, DistWords::chop(s, n), &bogus), VerificationFailed);
}
