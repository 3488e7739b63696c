#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/errors.hpp"
#include "ccs/oracle.hpp"
#include "ccs/rng.hpp"

using namespace ccs;
using oracle::Str;

namespace {
Str str(const char* s) {
    Str out;
    for (const char* p = s; *p; ++p) out.push_back(uint64_t(uint8_t(*p)));
    return out;
}
}  // namespace

TEST_CASE("naive_string_sort fixtures") {
    CHECK(oracle::naive_string_sort({str("a"), str("a"), str("b")}) ==
          std::vector<uint64_t>{0, 0, 1});
    CHECK(oracle::naive_string_sort({str("ab"), str("abc")}) == std::vector<uint64_t>{0, 1});
    CHECK(oracle::naive_string_sort({str("b"), str("ab"), str("abc")}) ==
          std::vector<uint64_t>{2, 0, 1});
}

TEST_CASE("naive_string_sort agrees with pairwise comparisons") {
    CounterRng rng(3, 1);
    for (int it = 0; it < 100; ++it) {
        std::vector<Str> xs;
        for (int k = 0; k < 12; ++k) {
            Str s(rng.next_in(1, 6));
            for (auto& c : s) c = rng.next_in(1, 3);
            xs.push_back(std::move(s));
        }
        auto ranks = oracle::naive_string_sort(xs);
        for (size_t i = 0; i < xs.size(); ++i) {
            // rank = number of distinct strings strictly smaller
            uint64_t smaller = 0;
            std::vector<Str> seen;
            for (size_t j = 0; j < xs.size(); ++j) {
                if (xs[j] == xs[i]) continue;
                if (oracle::lex_leq(xs[j], xs[i]) &&
                    std::find(seen.begin(), seen.end(), xs[j]) == seen.end()) {
                    seen.push_back(xs[j]);
                    ++smaller;
                }
            }
            CHECK(ranks[i] == smaller);
        }
    }
}

TEST_CASE("naive_pm fixtures") {
    CHECK(oracle::naive_pm(str("ab"), str("abab")) == std::vector<uint64_t>{0, 2});
    CHECK(oracle::naive_pm(str("abab"), str("abab")) == std::vector<uint64_t>{0});
    CHECK(oracle::naive_pm(str("aa"), str("aaaa")) == std::vector<uint64_t>{0, 1, 2});
    CHECK(oracle::naive_pm(str("abc"), str("ab")).empty());
}

TEST_CASE("naive_sa_lcp fixtures") {
    auto banana = oracle::naive_sa_lcp(str("banana"));
    CHECK(banana.sa == std::vector<uint64_t>{6, 4, 2, 1, 5, 3});
    CHECK(banana.lcp == std::vector<uint64_t>{1, 3, 0, 0, 2});

    auto aaa = oracle::naive_sa_lcp(str("aaa"));
    CHECK(aaa.sa == std::vector<uint64_t>{3, 2, 1});
    CHECK(aaa.lcp == std::vector<uint64_t>{1, 2});

    auto abc = oracle::naive_sa_lcp(str("abc"));
    CHECK(abc.lcp == std::vector<uint64_t>{0, 0});
}

TEST_CASE("naive_sa_lcp is self-consistent under the adjacent-minimum rule") {
    CounterRng rng(11, 2);
    for (int it = 0; it < 50; ++it) {
        Str s(rng.next_in(2, 40));
        for (auto& c : s) c = rng.next_in(1, 3);
        auto r = oracle::naive_sa_lcp(s);
        // LCP of any two sorted suffixes equals the minimum of the adjacent
        // LCPs between them
        for (size_t a = 0; a < s.size(); ++a)
            for (size_t b = a + 1; b < s.size(); ++b) {
                uint64_t min_adj = UINT64_MAX;
                for (size_t k = a; k < b; ++k) min_adj = std::min(min_adj, r.lcp[k]);
                Str sa(s.begin() + r.sa[a] - 1, s.end());
                Str sb(s.begin() + r.sa[b] - 1, s.end());
                CHECK(oracle::lcp_len(sa, sb) == min_adj);
            }
    }
}

TEST_CASE("naive_rmq") {
    CHECK(oracle::naive_rmq({5}, 1, 1) == 5);
    CHECK(oracle::naive_rmq({3, 1, 2}, 1, 3) == 1);
    CHECK_THROWS_AS(oracle::naive_rmq({3, 1}, 1, 3), IndexOutOfRange);

    CounterRng rng(5, 3);
    std::vector<uint64_t> a(100);
    for (auto& x : a) x = rng.next_below(50);
    for (int k = 0; k < 200; ++k) {
        uint64_t i = rng.next_in(1, a.size());
        uint64_t j = rng.next_in(i, a.size());
        uint64_t m = UINT64_MAX;
        for (uint64_t p = j; p >= i; --p) m = std::min(m, a[p - 1]);  // independent scan
        CHECK(oracle::naive_rmq(a, i, j) == m);
    }
}

TEST_CASE("dc_check") {
    CHECK(oracle::dc_check({0}, 1));
    CHECK(!oracle::dc_check({0, 1}, 4));  // residue 2 uncovered
    CHECK(oracle::dc_check({0, 1, 2}, 4));
    CHECK(oracle::dc_check({0, 1}, 3));
}

TEST_CASE("oracle input cap") {
    Str big((1 << 20) + 1, 1);
    CHECK_THROWS_AS(oracle::naive_sa_lcp(big), SimError);
}
