#include "ccs/patmatch.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "ccs/errors.hpp"
#include "ccs/mathutil.hpp"

namespace ccs {

std::vector<uint64_t> OccurrenceSet::decompress() const {
    std::vector<uint64_t> out;
    for (const ApPart& p : parts)
        for (uint64_t k = 0; k < p.count; ++k) out.push_back(p.start + k * p.diff);
    return out;
}

uint64_t OccurrenceSet::count() const {
    uint64_t c = 0;
    for (const ApPart& p : parts) c += p.count;
    return c;
}

// Greedy run construction over the sorted position sequence, processed one
// progression at a time so the cost is O(parts), not O(positions). The
// result is a unique normal form of the underlying position set.
std::vector<ApPart> canonicalize_parts(const std::vector<ApPart>& parts) {
    std::vector<ApPart> out;
    ApPart run{0, 0, 0};
    auto flush = [&]() {
        if (run.count == 0) return;
        if (run.count == 1) run.diff = 0;
        out.push_back(run);
        run = {0, 0, 0};
    };
    for (ApPart p : parts) {
        while (p.count > 0) {
            if (run.count == 0) {  // a fresh run swallows the whole part
                run = p;
                p.count = 0;
                break;
            }
            if (run.count == 1) {  // second element fixes the difference
                run.diff = p.start - run.start;
                run.count = 2;
                p.start += p.diff;
                p.count -= 1;
                continue;
            }
            if (p.start != run.last() + run.diff) {
                flush();
                continue;
            }
            if (p.count == 1 || p.diff == run.diff) {  // bulk absorb
                run.count += p.count;
                p.count = 0;
                break;
            }
            // stride changes after one more element; absorb it and re-check
            run.count += 1;
            p.start += p.diff;
            p.count -= 1;
        }
    }
    flush();
    return out;
}

OccurrenceSet compress_occurrences(uint64_t x_len, uint64_t y_len,
                                   const std::vector<uint64_t>& occurrences) {
    assert(x_len >= 1);
    (void)y_len;
    OccurrenceSet set;
    set.x_len = x_len;

    // slice by window floor(t / |X|), then validate the progression property
    // inside every window with three or more occurrences
    std::vector<ApPart> parts;
    size_t i = 0;
    while (i < occurrences.size()) {
        uint64_t window = occurrences[i] / x_len;
        size_t j = i;
        while (j < occurrences.size() && occurrences[j] / x_len == window) ++j;
        size_t len = j - i;
        if (len == 1) {
            parts.push_back({occurrences[i], 0, 1});
        } else {
            uint64_t d = occurrences[i + 1] - occurrences[i];
            if (len >= 3) {
                for (size_t k = i + 1; k + 1 < j; ++k)
                    if (occurrences[k + 1] - occurrences[k] != d) throw CompressionViolation();
            }
            parts.push_back({occurrences[i], d, len});
        }
        i = j;
    }
    set.parts = canonicalize_parts(parts);
    return set;
}

std::vector<ApPart> shift_clip_parts(const std::vector<ApPart>& parts, uint64_t shift,
                                     uint64_t max_offset) {
    std::vector<ApPart> out;
    for (const ApPart& p : parts) {
        // drop terms below `shift`, then terms above shift + max_offset
        uint64_t start = p.start, count = p.count, diff = p.diff;
        if (p.last() < shift) continue;
        if (start < shift) {
            uint64_t skip = diff == 0 ? count : ceil_div(shift - start, diff);
            start += skip * diff;
            count -= skip;
        }
        if (count == 0) continue;
        uint64_t limit = shift + max_offset;
        if (start > limit) continue;
        if (diff > 0 && start + (count - 1) * diff > limit)
            count = (limit - start) / diff + 1;
        out.push_back({start - shift, count == 1 ? 0 : diff, count});
    }
    return canonicalize_parts(out);
}

namespace {

std::vector<Interval> merge_intervals(std::vector<Interval> xs) {
    std::sort(xs.begin(), xs.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    for (const Interval& x : xs) {
        if (!out.empty() && x.lo <= out.back().hi + 1)
            out.back().hi = std::max(out.back().hi, x.hi);
        else
            out.push_back(x);
    }
    return out;
}

// union over occurrences i of [i+1 .. i+n], clipped to [1..len]
std::vector<Interval> covered_intervals(const OccurrenceSet& occ, uint64_t n_cover, uint64_t len) {
    std::vector<Interval> cov;
    for (const ApPart& p : occ.parts) {
        if (p.count == 0) continue;
        if (p.count == 1 || p.diff <= n_cover) {
            cov.push_back({p.start + 1, std::min(p.last() + n_cover, len)});
        } else {
            for (uint64_t k = 0; k < p.count; ++k) {
                uint64_t s = p.start + k * p.diff;
                cov.push_back({s + 1, std::min(s + n_cover, len)});
            }
        }
    }
    return merge_intervals(std::move(cov));
}

std::vector<Interval> complement(const std::vector<Interval>& cov, uint64_t len) {
    std::vector<Interval> out;
    uint64_t at = 1;
    for (const Interval& c : cov) {
        if (c.lo > at) out.push_back({at, c.lo - 1});
        at = std::max(at, c.hi + 1);
    }
    if (at <= len) out.push_back({at, len});
    return out;
}

}  // namespace

GapDecomposition uncovered_regions(const OccurrenceSet& b_in_p, const OccurrenceSet& e_in_p,
                                   const OccurrenceSet& b_in_t, const OccurrenceSet& e_in_t,
                                   uint64_t p_len, uint64_t t_len, uint64_t n) {
    GapDecomposition gd;
    auto r_of = [&](const OccurrenceSet& b, const OccurrenceSet& e, uint64_t len) {
        std::vector<Interval> cov = covered_intervals(b, n, len);
        std::vector<Interval> cov2 = covered_intervals(e, n, len);
        cov.insert(cov.end(), cov2.begin(), cov2.end());
        return complement(merge_intervals(std::move(cov)), len);
    };
    gd.r_p = r_of(b_in_p, e_in_p, p_len);
    gd.r_t = r_of(b_in_t, e_in_t, t_len);
    return gd;
}

PmInput make_pm_input(uint32_t n_nodes, const std::vector<uint64_t>& pattern,
                      const std::vector<uint64_t>& text, uint64_t max_total) {
    if (pattern.empty() || text.empty()) throw SimError("pattern matching needs nonempty P and T");
    if (pattern.size() + text.size() > max_total)
        throw SimError("pattern matching input exceeds c_L*n^2");
    PmInput in;
    in.p_len = pattern.size();
    std::vector<uint64_t> flat = pattern;
    flat.insert(flat.end(), text.begin(), text.end());
    for (uint64_t c : flat)
        if (c == 0) throw SimError("character 0 is reserved");
    in.array = DistWords::chop(flat, n_nodes);
    return in;
}

std::vector<std::vector<uint64_t>> pm_short(Clique& cq, const DistWords& array, uint64_t pa,
                                            uint64_t p_len, uint64_t ta, uint64_t t_len) {
    const uint32_t n = cq.n();
    assert(p_len >= 1 && p_len <= n);
    std::vector<std::vector<uint64_t>> result(n);
    if (t_len < p_len) return result;

    // piece length announcement
    GenDemand meta(cq.active_nodes());
    for (uint32_t v = 0; v < n; ++v) meta.cast(v, 0, n - 1, array.piece[v].size());
    cq.gen_route_step(meta);

    // prefix positions of pieces
    std::vector<uint64_t> before(n + 1, 0);
    for (uint32_t v = 0; v < n; ++v) before[v + 1] = before[v] + array.piece[v].size();
    auto node_of = [&](uint64_t pos1) {
        return uint32_t(std::upper_bound(before.begin(), before.end(), pos1 - 1) - before.begin()) -
               1;
    };

    // text overlap: the holder of T[j] casts it backward to every node from
    // the holder of T[j - p_len + 1] up to its own predecessor
    GenDemand overlap(cq.active_nodes());
    for (uint64_t j = 1; j < t_len; ++j) {
        uint64_t pos = ta + j;  // array position of T[j+1], 0-based j
        uint32_t holder = node_of(pos);
        uint64_t back = pos >= p_len - 1 ? pos - (p_len - 1) : 1;
        back = std::max(back, ta);
        uint32_t first = node_of(back);
        if (first < holder) overlap.cast(holder, first, holder - 1, array.at(pos));
    }
    cq.gen_route_step(overlap);

    // the pattern is broadcast to everyone
    GenDemand pat(cq.active_nodes());
    for (uint64_t k = 0; k < p_len; ++k) {
        uint64_t pos = pa + k;
        pat.cast(node_of(pos), 0, n - 1, array.at(pos));
    }
    cq.gen_route_step(pat);

    // local scan: node v owns text offsets whose first character lies in its
    // piece
    std::vector<uint64_t> pattern(p_len);
    for (uint64_t k = 0; k < p_len; ++k) pattern[k] = array.at(pa + k);
    for (uint64_t i = 0; i + p_len <= t_len; ++i) {
        uint32_t v = node_of(ta + i);
        bool ok = true;
        for (uint64_t k = 0; k < p_len && ok; ++k) ok = array.at(ta + i + k) == pattern[k];
        if (ok) result[v].push_back(i);
    }
    return result;
}

namespace {

OccurrenceSet assemble_occurrences(Clique& cq, const std::vector<std::vector<uint64_t>>& by_node,
                                   uint64_t x_len, uint64_t y_len) {
    // every node broadcasts its window-compressed occurrence slices; the
    // assembled set is the canonical compression of the union
    GenDemand cast(cq.active_nodes());
    const uint32_t n = cq.n();
    std::vector<uint64_t> all;
    for (uint32_t v = 0; v < n; ++v) {
        std::vector<ApPart> local;
        size_t i = 0;
        const auto& occ = by_node[v];
        while (i < occ.size()) {
            uint64_t window = occ[i] / x_len;
            size_t j = i;
            while (j < occ.size() && occ[j] / x_len == window) ++j;
            uint64_t d = (j - i) >= 2 ? occ[i + 1] - occ[i] : 0;
            local.push_back({occ[i], d, j - i});
            i = j;
        }
        for (const ApPart& p : canonicalize_parts(local)) {
            cast.cast(v, 0, n - 1, p.start);
            cast.cast(v, 0, n - 1, p.diff);
            cast.cast(v, 0, n - 1, p.count);
        }
        all.insert(all.end(), occ.begin(), occ.end());
    }
    cq.gen_route_step(cast);
    std::sort(all.begin(), all.end());
    return compress_occurrences(x_len, y_len, all);
}

}  // namespace

std::vector<std::vector<uint64_t>> pm_long(Clique& cq, const PmInput& input) {
    const uint32_t n = cq.n();
    const uint64_t p_len = input.p_len, t_len = input.t_len();
    assert(p_len > n);
    std::vector<std::vector<uint64_t>> result(n);
    if (t_len < p_len) return result;

    const uint64_t pa = 1, ta = 1 + p_len;
    const uint64_t ba = pa;                  // B = P[1..n]
    const uint64_t ea = pa + p_len - n;      // E = P[|P|-n+1..|P|]

    auto bp = assemble_occurrences(cq, pm_short(cq, input.array, ba, n, pa, p_len), n, p_len);
    auto bt = assemble_occurrences(cq, pm_short(cq, input.array, ba, n, ta, t_len), n, t_len);
    auto ep = assemble_occurrences(cq, pm_short(cq, input.array, ea, n, pa, p_len), n, p_len);
    auto et = assemble_occurrences(cq, pm_short(cq, input.array, ea, n, ta, t_len), n, t_len);

    GapDecomposition gd = uncovered_regions(bp, ep, bt, et, p_len, t_len, n);

    // the maximal uncovered regions of P and T, in position order, form the
    // string set S; its array view reuses the chars in place
    std::vector<std::vector<uint64_t>> s_pieces(n);
    std::vector<uint64_t> s_lengths, s_starts;
    {
        uint64_t pos = 1;
        auto add_region = [&](uint64_t base, const Interval& iv) {
            s_starts.push_back(pos);
            s_lengths.push_back(iv.hi - iv.lo + 1);
            pos += iv.hi - iv.lo + 1;
            for (uint64_t x = iv.lo; x <= iv.hi; ++x) {
                auto [v, off] = input.array.locate(base + x - 1);
                s_pieces[v].push_back(input.array.piece[v][off]);
            }
        };
        for (const Interval& iv : gd.r_p) add_region(pa, iv);
        for (const Interval& iv : gd.r_t) add_region(ta, iv);
    }
    const uint64_t s_count = s_lengths.size();
    if (s_count > cq.config().load_limit())
        throw SimError("gap string count exceeds c_L*n");

    gd.rank_p.assign(gd.r_p.size(), 0);
    gd.rank_t.assign(gd.r_t.size(), 0);
    if (s_count > 0) {
        DistStringSet s_set;
        s_set.lengths = s_lengths;
        s_set.start_pos = s_starts;
        s_set.chars.piece = s_pieces;
        StringSortResult sorted = string_sort(cq, s_set);

        // holders broadcast (string index, rank)
        GenDemand rank_cast(cq.active_nodes());
        for (uint64_t j = 0; j < s_count; ++j) {
            rank_cast.cast(sorted.holder[j], 0, n - 1, j);
            rank_cast.cast(sorted.holder[j], 0, n - 1, sorted.rank[j]);
        }
        cq.gen_route_step(rank_cast);
        for (uint64_t j = 0; j < s_count; ++j) {
            if (j < gd.r_p.size())
                gd.rank_p[j] = sorted.rank[j];
            else
                gd.rank_t[j - gd.r_p.size()] = sorted.rank[j];
        }
    }

    // offset-by-offset verification at the node holding T[i+1]
    const uint64_t max_rel = p_len - n;  // occurrences of B/E inside P lie in [0..|P|-n]
    auto bp_canon = bp.parts;            // already canonical
    auto ep_canon = ep.parts;

    std::vector<uint64_t> before(n + 1, 0);
    for (uint32_t v = 0; v < n; ++v) before[v + 1] = before[v] + input.array.piece[v].size();
    auto node_of = [&](uint64_t pos1) {
        return uint32_t(std::upper_bound(before.begin(), before.end(), pos1 - 1) - before.begin()) -
               1;
    };

    for (uint64_t i = 0; i + p_len <= t_len; ++i) {
        bool ok = shift_clip_parts(bt.parts, i, max_rel) == bp_canon &&
                  shift_clip_parts(et.parts, i, max_rel) == ep_canon;
        for (size_t g = 0; ok && g < gd.r_p.size(); ++g) {
            Interval want{gd.r_p[g].lo + i, gd.r_p[g].hi + i};
            auto it = std::lower_bound(gd.r_t.begin(), gd.r_t.end(), want.lo,
                                       [](const Interval& iv, uint64_t lo) { return iv.lo < lo; });
            if (it == gd.r_t.end() || !(*it == want)) {
                ok = false;
                break;
            }
            size_t tg = size_t(it - gd.r_t.begin());
            ok = gd.rank_p[g] == gd.rank_t[tg];
        }
        if (ok) result[node_of(ta + i)].push_back(i);
    }
    return result;
}

std::vector<std::vector<uint64_t>> pm_match(Clique& cq, const PmInput& input) {
    const uint32_t n = cq.n();
    if (input.array.total() > cq.config().load_limit() * uint64_t(cq.n()))
        throw SimError("pattern matching input exceeds c_L*n^2");

    // every node announces how many pattern characters it holds; |P| follows
    GenDemand meta(cq.active_nodes());
    uint64_t seen = 0;
    for (uint32_t v = 0; v < n; ++v) {
        uint64_t here = std::min<uint64_t>(input.array.piece[v].size(),
                                           input.p_len > seen ? input.p_len - seen : 0);
        seen += input.array.piece[v].size();
        meta.cast(v, 0, n - 1, here);
    }
    cq.gen_route_step(meta);

    if (input.p_len <= n)
        return pm_short(cq, input.array, 1, input.p_len, 1 + input.p_len, input.t_len());
    return pm_long(cq, input);
}

std::vector<uint64_t> flatten_offsets(const std::vector<std::vector<uint64_t>>& by_node) {
    std::vector<uint64_t> out;
    for (const auto& v : by_node) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ccs
