#include "ccs/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ccs/errors.hpp"

namespace ccs::oracle {

namespace {
constexpr uint64_t kMaxInput = uint64_t(1) << 20;

void check_size(uint64_t n) {
    if (n > kMaxInput) throw SimError("oracle input larger than 2^20 rejected");
}
}  // namespace

uint64_t lcp_len(const Str& a, const Str& b) {
    uint64_t l = 0;
    while (l < a.size() && l < b.size() && a[l] == b[l]) ++l;
    return l;
}

bool lex_leq(const Str& a, const Str& b) {
    uint64_t l = lcp_len(a, b);
    if (l < a.size() && l < b.size()) return a[l] < b[l];
    return a.size() <= b.size();
}

std::vector<uint64_t> naive_string_sort(const std::vector<Str>& strings) {
    uint64_t total = 0;
    for (const Str& s : strings) total += s.size();
    check_size(total);

    std::vector<uint32_t> order(strings.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
        if (strings[x] == strings[y]) return x < y;
        return lex_leq(strings[x], strings[y]);
    });
    std::vector<uint64_t> rank(strings.size(), 0);
    uint64_t r = 0;
    for (size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && strings[order[k]] != strings[order[k - 1]]) ++r;
        rank[order[k]] = r;
    }
    return rank;
}

std::vector<uint64_t> naive_pm(const Str& pattern, const Str& text) {
    check_size(pattern.size() + text.size());
    std::vector<uint64_t> hits;
    if (pattern.empty() || pattern.size() > text.size()) return hits;
    for (uint64_t i = 0; i + pattern.size() <= text.size(); ++i) {
        bool ok = true;
        for (uint64_t k = 0; k < pattern.size() && ok; ++k) ok = text[i + k] == pattern[k];
        if (ok) hits.push_back(i);
    }
    return hits;
}

SaLcp naive_sa_lcp(const Str& s) {
    check_size(s.size());
    SaLcp out;
    out.sa.resize(s.size());
    std::iota(out.sa.begin(), out.sa.end(), 1);
    auto suffix_less = [&](uint64_t a, uint64_t b) {
        uint64_t i = a - 1, j = b - 1;
        while (i < s.size() && j < s.size()) {
            if (s[i] != s[j]) return s[i] < s[j];
            ++i, ++j;
        }
        return i == s.size() && j < s.size();
    };
    std::sort(out.sa.begin(), out.sa.end(), suffix_less);
    if (!s.empty()) {
        out.lcp.resize(s.size() - 1);
        for (size_t k = 0; k + 1 < s.size(); ++k) {
            uint64_t i = out.sa[k] - 1, j = out.sa[k + 1] - 1, l = 0;
            while (i + l < s.size() && j + l < s.size() && s[i + l] == s[j + l]) ++l;
            out.lcp[k] = l;
        }
    }
    return out;
}

uint64_t naive_rmq(const std::vector<uint64_t>& a, uint64_t i, uint64_t j) {
    if (i < 1 || j < i || j > a.size()) throw IndexOutOfRange(i, j, a.size());
    uint64_t m = a[i - 1];
    for (uint64_t k = i; k <= j; ++k) m = std::min(m, a[k - 1]);
    return m;
}

bool dc_check(const std::vector<uint32_t>& cover, uint32_t t) {
    if (t == 0) return false;
    std::vector<bool> covered(t, false);
    for (uint32_t a : cover)
        for (uint32_t b : cover) covered[((a % t) + t - (b % t)) % t] = true;
    for (uint32_t d = 0; d < t; ++d)
        if (!covered[d]) return false;
    return true;
}

}  // namespace ccs::oracle
