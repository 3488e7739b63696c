#include "ccs/sacon.hpp"

#include <algorithm>
#include <cassert>

#include "ccs/errors.hpp"
#include "ccs/objsort.hpp"
#include "ccs/oracle.hpp"

namespace ccs {

DifferenceCover build_dc(uint32_t t) {
    if (t < 1) throw std::invalid_argument("build_dc: t must be >= 1");
    uint32_t r = 1;
    while (r * r < t) ++r;
    DifferenceCover dc;
    dc.t = t;
    std::vector<bool> in(t, false);
    for (uint32_t x = 0; x < r && x < t; ++x) in[x] = true;
    for (uint32_t x = 0; x <= r * r && x < t; x += r) in[x] = true;
    for (uint32_t x = 0; x < t; ++x)
        if (in[x]) dc.members.push_back(x);
    return dc;
}

void SampleMap::init(const DifferenceCover& dc, uint64_t len) {
    t = dc.t;
    cover = dc.members;
    s_len = len;
    class_count.assign(cover.size(), 0);
    class_start.assign(cover.size(), 0);
    uint64_t at = 1;
    for (size_t k = 0; k < cover.size(); ++k) {
        uint32_t m = cover[k];
        if (m == 0)
            class_count[k] = len / t;
        else
            class_count[k] = m <= len ? (len - m) / t + 1 : 0;
        class_start[k] = at;
        at += class_count[k] + 1;  // +1 for the delimiter after the stream
    }
    sprime_len = at - 2;  // no delimiter after the last stream
}

bool SampleMap::sampled(uint64_t pos) const {
    if (pos < 1 || pos > s_len) return false;
    return std::binary_search(cover.begin(), cover.end(), uint32_t(pos % t));
}

uint64_t SampleMap::f(uint64_t pos) const {
    assert(sampled(pos));
    uint32_t residue = uint32_t(pos % t);
    size_t k = size_t(std::lower_bound(cover.begin(), cover.end(), residue) - cover.begin());
    uint64_t idx = residue == 0 ? pos / t - 1 : (pos - residue) / t;
    return class_start[k] + idx;
}

uint64_t SampleMap::f_inverse(uint64_t sp) const {
    assert(sp >= 1 && sp <= sprime_len);
    size_t k = size_t(std::upper_bound(class_start.begin(), class_start.end(), sp) -
                      class_start.begin()) - 1;
    uint64_t idx = sp - class_start[k];
    if (idx >= class_count[k]) return 0;  // delimiter slot
    uint32_t residue = cover[k];
    return residue == 0 ? (idx + 1) * t : residue + idx * t;
}

uint64_t SampleMap::sample_count() const {
    uint64_t m = 0;
    for (uint64_t c : class_count) m += c;
    return m;
}

std::vector<uint64_t> make_rep_payload(const std::vector<uint64_t>& window,
                                       const std::vector<uint64_t>& rank_slots) {
    assert(window.size() == rank_slots.size());
    std::vector<uint64_t> p(window);
    p.insert(p.end(), rank_slots.begin(), rank_slots.end());
    return p;
}

int rep_compare(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    return compare_payloads(PayloadOrder::window_rank, a, b);
}

uint32_t sa_depth_budget(uint32_t n_nodes) { return 4 * log2_log2(n_nodes) + 8; }

namespace {

// largest eps from a fixed ladder whose size class ceil(n^(1-eps)) still
// fits objects of `words` words
Frac size_class_eps(uint32_t n, uint64_t words) {
    static constexpr Frac ladder[] = {{2, 3}, {1, 2}, {1, 3}, {1, 4}, {1, 8}};
    for (Frac eps : ladder)
        if (ipow_ceil_one_minus(n, eps) >= words) return eps;
    throw SizeClassViolation(words, ipow_ceil_one_minus(n, Frac{1, 8}));
}

struct PosIndex {
    std::vector<uint64_t> before;

    explicit PosIndex(const DistWords& w) : before(w.nodes() + 1, 0) {
        for (uint32_t v = 0; v < w.nodes(); ++v) before[v + 1] = before[v] + w.piece[v].size();
    }
    uint32_t node_of(uint64_t pos1) const {
        return uint32_t(std::upper_bound(before.begin(), before.end(), pos1 - 1) - before.begin()) -
               1;
    }
};

// node of 0-based index `k` in an even chop of `len` entries over n nodes
uint32_t chop_node(uint64_t len, uint32_t n, uint64_t k) {
    uint64_t base = len / n, extra = len % n;
    uint64_t fat = extra * (base + 1);
    if (k < fat) return uint32_t(k / (base + 1));
    return uint32_t(extra + (k - fat) / std::max<uint64_t>(base, 1));
}

// characters [pos .. pos+count-1], 0 past the end
std::vector<uint64_t> padded_chars(const std::vector<uint64_t>& flat, uint64_t pos,
                                   uint64_t count) {
    std::vector<uint64_t> out(count, 0);
    for (uint64_t k = 0; k < count && pos + k <= flat.size(); ++k) out[k] = flat[pos + k - 1];
    return out;
}

// every node casts characters backward so each node can read `reach`
// characters past its own piece
void gather_tail(Clique& cq, const DistWords& s, uint64_t reach) {
    PosIndex idx(s);
    GenDemand cast(cq.active_nodes());
    const uint64_t len = s.total();
    for (uint64_t p = 1; p <= len; ++p) {
        uint32_t holder = idx.node_of(p);
        uint64_t back = p > reach ? p - reach : 1;
        uint32_t first = idx.node_of(back);
        if (first < holder) cast.cast(holder, first, holder - 1, s.at(p));
    }
    cq.gen_route_step(cast);
}

// t for this level: max(4, min(ceil(n^eps), ceil(n^(1/3)))) with eps growing
// by 1.4 per level from eps_1 = max(0.05, 13.219/log2 n); 13.219 is
// 10*log2(2.5), and 2.5 bounds |S'|*sqrt(t)/|S| for every cover built here.
uint32_t level_t(uint32_t n, uint32_t depth) {
    uint64_t eps_milli = std::max<uint64_t>(50, 13219 / ceil_log2(n));
    for (uint32_t k = 0; k < depth; ++k) eps_milli = eps_milli * 14 / 10;
    eps_milli = std::min<uint64_t>(eps_milli, 1000);
    uint64_t by_eps = ipow_ceil(n, uint32_t(eps_milli), 1000);
    uint64_t cap = ipow_ceil(n, 1, 3);
    return uint32_t(std::max<uint64_t>(4, std::min(by_eps, cap)));
}

struct LevelResult {
    std::vector<uint64_t> sa;   // flat, values are 1-based positions
    std::vector<uint64_t> isa;  // flat, 1-based ranks
    std::vector<uint64_t> lcp;  // flat; empty unless LCP was requested
};

LevelResult solve_level(Clique& cq, const DistWords& s, uint32_t depth, bool want_lcp,
                        SaTrace* trace);

// Appends the sentinel, solves, and strips the sentinel's entry again. Every
// level works on a 0-terminated string so distinct suffixes always separate
// within one window.
LevelResult solve_with_sentinel(Clique& cq, const DistWords& s, uint32_t depth, bool want_lcp,
                                SaTrace* trace) {
    DistWords work = s;
    work.piece[work.nodes() - 1].push_back(0);
    LevelResult lr = solve_level(cq, work, depth, want_lcp, trace);

    const uint64_t len = s.total();
    if (lr.sa.empty() || lr.sa[0] != len + 1)
        throw SimError("sentinel suffix is not the smallest");
    LevelResult out;
    out.sa.assign(lr.sa.begin() + 1, lr.sa.end());
    out.isa.resize(len);
    for (uint64_t p = 0; p < len; ++p) out.isa[p] = lr.isa[p] - 1;
    if (want_lcp && !lr.lcp.empty()) out.lcp.assign(lr.lcp.begin() + 1, lr.lcp.end());
    return out;
}

// gathers the whole string on node 0 and solves sequentially
LevelResult solve_base(Clique& cq, const DistWords& s, SaTrace* trace) {
    const uint64_t len = s.total();
    const uint32_t n = cq.n();
    RoutingDemand gather;
    for (uint32_t v = 0; v < s.nodes(); ++v)
        if (!s.piece[v].empty()) gather.send(v, 0, s.piece[v]);
    cq.route_step(gather);

    auto flat = s.flatten();
    auto ref = oracle::naive_sa_lcp(flat);
    LevelResult res;
    res.sa = ref.sa;
    res.lcp = ref.lcp;
    res.isa.resize(len);
    for (uint64_t k = 0; k < len; ++k) res.isa[res.sa[k] - 1] = k + 1;

    PosIndex idx(s);
    RoutingDemand sa_out, isa_out, lcp_out;
    for (uint64_t k = 0; k < len; ++k) sa_out.send(0, chop_node(len, n, k), res.sa[k]);
    for (uint64_t p = 1; p <= len; ++p) isa_out.send(0, idx.node_of(p), res.isa[p - 1]);
    for (uint64_t k = 0; k + 1 < len; ++k) lcp_out.send(0, chop_node(len - 1, n, k), res.lcp[k]);
    cq.route_step(sa_out);
    cq.route_step(isa_out);
    cq.route_step(lcp_out);

    if (trace) {
        SaTraceLevel lvl;
        lvl.s_len = len;
        lvl.s_chars = flat;
        lvl.base_case = true;
        trace->levels.push_back(std::move(lvl));
    }
    return res;
}

LevelResult solve_level(Clique& cq, const DistWords& s, uint32_t depth, bool want_lcp,
                        SaTrace* trace) {
    const uint32_t n = cq.n();
    const uint64_t len = s.total();
    if (depth > sa_depth_budget(n)) throw RecursionBudgetExceeded(depth, sa_depth_budget(n));
    if (len <= cq.config().load_limit()) return solve_base(cq, s, trace);

    const uint32_t t = level_t(n, depth);
    DifferenceCover dc = build_dc(t);

    SampleString sample = build_sample_string(cq, s, dc);
    const SampleMap& map = sample.map;
    auto flat = s.flatten();
    PosIndex idx(s);
    PosIndex pidx(sample.s_prime);

    if (trace) {
        SaTraceLevel lvl;
        lvl.s_len = len;
        lvl.t = t;
        lvl.cover = dc.members;
        lvl.s_chars = flat;
        lvl.sprime_chars = sample.s_prime.flatten();
        for (uint64_t p = 1; p <= len; ++p)
            if (map.sampled(p)) lvl.sampled_positions.push_back(p);
        trace->levels.push_back(std::move(lvl));
    }
    const size_t trace_slot = trace ? trace->levels.size() - 1 : 0;

    LevelResult sub = solve_with_sentinel(cq, sample.s_prime, depth + 1, want_lcp, trace);

    // route ISA_{S'} home: the holder of S position q learns the rank of its
    // sampled suffix among all S' suffixes
    std::vector<uint64_t> sample_rank(len + 2, 0);  // by S position; 0 = not sampled
    {
        RoutingDemand home;
        for (uint64_t sp = 1; sp <= map.sprime_len; ++sp) {
            uint64_t q = map.f_inverse(sp);
            if (q == 0) continue;
            home.send(pidx.node_of(sp), idx.node_of(q), sub.isa[sp - 1]);
            sample_rank[q] = sub.isa[sp - 1];
        }
        cq.route_step(home);
    }

    // sampled ranks cast backward so every node sees the rank slots of its
    // windows
    {
        GenDemand cast(cq.active_nodes());
        for (uint64_t p = 1; p <= len; ++p) {
            if (sample_rank[p] == 0) continue;
            uint32_t holder = idx.node_of(p);
            uint64_t back = p >= t ? p - (t - 1) : 1;
            uint32_t first = idx.node_of(back);
            if (first < holder) cast.cast(holder, first, holder - 1, sample_rank[p]);
        }
        cq.gen_route_step(cast);
    }

    // representative objects for all positions
    ObjectSet reps(n);
    std::vector<std::vector<uint64_t>> pos_of(n);  // origin index -> position
    for (uint64_t p = 1; p <= len; ++p) {
        uint32_t v = idx.node_of(p);
        ObjectRecord o;
        o.origin_node = v;
        o.origin_index = uint32_t(reps.per_node[v].size());
        std::vector<uint64_t> window = padded_chars(flat, p, t);
        std::vector<uint64_t> slots(t, 0);
        for (uint64_t j = 0; j < t; ++j)
            if (p + j <= len) slots[j] = sample_rank[p + j];
        o.payload = make_rep_payload(window, slots);
        reps.per_node[v].push_back(std::move(o));
        pos_of[v].push_back(p);
    }
    std::vector<uint64_t> rep_counts(n);
    for (uint32_t v = 0; v < n; ++v) rep_counts[v] = reps.per_node[v].size();

    ObjectSet sorted_reps = reps;
    sort_group(cq, sorted_reps, NodeRange{0, n}, size_class_eps(n, 2 * uint64_t(t)),
               PayloadOrder::window_rank);
    auto rep_ranks = assign_ranks(cq, sorted_reps, PayloadOrder::window_rank, rep_counts);

    LevelResult res;
    res.isa.resize(len);
    res.sa.resize(len);
    {
        std::vector<bool> seen(len + 1, false);
        for (uint32_t v = 0; v < n; ++v)
            for (size_t i = 0; i < pos_of[v].size(); ++i) {
                uint64_t pos = pos_of[v][i];
                uint64_t rank1 = rep_ranks[v][i] + 1;
                if (rank1 > len || seen[rank1])
                    throw SimError("representative objects are not totally ordered");
                seen[rank1] = true;
                res.isa[pos - 1] = rank1;
                res.sa[rank1 - 1] = pos;
            }
    }
    {
        RoutingDemand sa_ship;
        for (uint64_t p = 1; p <= len; ++p)
            sa_ship.send(idx.node_of(p), chop_node(len, n, res.isa[p - 1] - 1), p);
        cq.route_step(sa_ship);
    }

    if (!want_lcp) return res;

    // --- LCP step 1: exact LCPs of lexicographically adjacent sampled
    // suffixes. Delimiter suffixes of S' start with 0 and occupy the first
    // slots of its suffix array; the sampled suffixes follow contiguously.
    const uint64_t m = map.sample_count();
    const uint64_t delims = map.delimiter_count();
    for (uint64_t k = 0; k < delims; ++k)
        if (map.f_inverse(sub.sa[k]) != 0) throw SimError("sample delimiters out of order");

    std::vector<std::vector<Query>> char_q(cq.active_nodes());
    struct BarJob {
        uint64_t a, b, lprime;
        uint64_t slot;  // first index into this node's char answers
        uint64_t r;     // LCPbar index
    };
    std::vector<std::vector<BarJob>> jobs(n);
    RoutingDemand meta;
    for (uint64_t r = 0; r + 1 < m; ++r) {
        uint64_t a = map.f_inverse(sub.sa[delims + r]);
        uint64_t b = map.f_inverse(sub.sa[delims + r + 1]);
        uint64_t lp = sub.lcp[delims + r];
        assert(a != 0 && b != 0);
        uint32_t v = idx.node_of(a);
        meta.send(pidx.node_of(map.f(a)), v, {b, lp});
        BarJob job{a, b, lp, char_q[v].size(), r};
        for (uint64_t k = 0; k < t; ++k) {
            uint64_t qa = a + lp * t + k, qb = b + lp * t + k;
            char_q[v].push_back({qa <= len ? idx.node_of(qa) : v, qa});
            char_q[v].push_back({qb <= len ? idx.node_of(qb) : v, qb});
        }
        jobs[v].push_back(job);
    }
    cq.route_step(meta);
    std::vector<uint64_t> state(cq.active_nodes(), 0);
    for (uint32_t v = 0; v < n; ++v) state[v] = s.piece[v].size();
    Resolver chars = [&](uint32_t, uint64_t pos) -> std::optional<uint64_t> {
        return pos >= 1 && pos <= len ? flat[pos - 1] : 0;
    };
    auto char_a = cq.query_route(char_q, chars, state);

    std::vector<uint64_t> lcpbar(m > 0 ? m - 1 : 0, 0);
    RoutingDemand bar_ship;
    for (uint32_t v = 0; v < n; ++v) {
        for (const BarJob& job : jobs[v]) {
            uint64_t l = job.lprime * t;
            for (uint64_t k = 0; k < t; ++k) {
                uint64_t pa = job.a + job.lprime * t + k, pb = job.b + job.lprime * t + k;
                uint64_t ca = pa <= len ? char_a[v][job.slot + 2 * k] : 0;
                uint64_t cb = pb <= len ? char_a[v][job.slot + 2 * k + 1] : 0;
                if (pa > len || pb > len) break;  // one suffix ended
                if (ca != cb) break;
                ++l;
            }
            lcpbar[job.r] = l;
            bar_ship.send(v, chop_node(lcpbar.size(), n, job.r), l);
        }
    }
    cq.route_step(bar_ship);
    if (trace) trace->levels[trace_slot].lcpbar = lcpbar;

    // --- LCP step 2: every suffix against its lexicographic successor. The
    // post-sort layout holds the representative objects in suffix order;
    // each node borrows its successor's first object.
    {
        RoutingDemand shift;
        int32_t prev = -1;
        for (uint32_t v = 0; v < n; ++v) {
            if (sorted_reps.per_node[v].empty()) continue;
            if (prev >= 0) shift.send(v, uint32_t(prev), sorted_reps.per_node[v].front().payload);
            prev = int32_t(v);
        }
        cq.route_step(shift);
    }

    res.lcp.assign(len > 0 ? len - 1 : 0, 0);
    std::vector<std::vector<std::pair<uint64_t, uint64_t>>> rmq_q(cq.active_nodes());
    struct RmqJob {
        uint64_t k;     // LCP index (0-based pair k, k+1 in suffix order)
        uint64_t base;  // witness offset
        uint64_t slot;
    };
    std::vector<std::vector<RmqJob>> rmq_jobs(n);
    RoutingDemand lcp_ship;
    {
        uint64_t k = 0;
        for (uint32_t v = 0; v < n; ++v) {
            for (size_t i = 0; i < sorted_reps.per_node[v].size(); ++i, ++k) {
                if (k + 1 >= len) break;
                const ObjectRecord& cur_o = sorted_reps.per_node[v][i];
                const ObjectRecord* nxt_o = nullptr;
                if (i + 1 < sorted_reps.per_node[v].size())
                    nxt_o = &sorted_reps.per_node[v][i + 1];
                else
                    for (uint32_t u = v + 1; u < n && !nxt_o; ++u)
                        if (!sorted_reps.per_node[u].empty()) nxt_o = &sorted_reps.per_node[u].front();
                assert(nxt_o);
                const auto& cur = cur_o.payload;
                const auto& nxt = nxt_o->payload;
                uint64_t p_cur = pos_of[cur_o.origin_node][cur_o.origin_index];
                uint64_t p_nxt = pos_of[nxt_o->origin_node][nxt_o->origin_index];

                // scan the windows with true end-of-string semantics
                uint64_t wl = 0;
                bool decided = false;
                for (; wl < t; ++wl) {
                    bool a_end = p_cur + wl > len, b_end = p_nxt + wl > len;
                    if (a_end || b_end || cur[wl] != nxt[wl]) {
                        res.lcp[k] = wl;
                        decided = true;
                        break;
                    }
                }
                if (decided) {
                    lcp_ship.send(v, chop_node(len - 1, n, k), res.lcp[k]);
                    continue;
                }
                uint64_t kk = 0;
                while (kk < t && !(cur[t + kk] != 0 && nxt[t + kk] != 0)) ++kk;
                if (kk == t) throw NoWitness();
                uint64_t ra = cur[t + kk] - delims, rb = nxt[t + kk] - delims;
                if (ra >= rb) throw SimError("successor ranks out of order");
                rmq_jobs[v].push_back(RmqJob{k, kk, rmq_q[v].size()});
                rmq_q[v].push_back({ra, rb - 1});
            }
        }
    }
    DistWords bar_arr = DistWords::chop(lcpbar, n);
    auto rmq_a = cq.distributed_rmq(bar_arr, rmq_q);
    for (uint32_t v = 0; v < n; ++v)
        for (const RmqJob& job : rmq_jobs[v]) {
            res.lcp[job.k] = job.base + rmq_a[v][job.slot];
            lcp_ship.send(v, chop_node(len - 1, n, job.k), res.lcp[job.k]);
        }
    cq.route_step(lcp_ship);
    return res;
}

}  // namespace

SampleString build_sample_string(Clique& cq, const DistWords& s, const DifferenceCover& dc) {
    const uint32_t n = cq.n();
    const uint64_t len = s.total();
    const uint32_t t = dc.t;

    SampleString out;
    out.map.init(dc, len);

    gather_tail(cq, s, t - 1);
    auto flat = s.flatten();
    PosIndex idx(s);

    ObjectSet windows(n);
    std::vector<std::vector<uint64_t>> window_pos(n);
    for (uint64_t p = 1; p <= len; ++p) {
        if (!out.map.sampled(p)) continue;
        uint32_t v = idx.node_of(p);
        ObjectRecord o;
        o.origin_node = v;
        o.origin_index = uint32_t(windows.per_node[v].size());
        o.payload = padded_chars(flat, p, t);
        windows.per_node[v].push_back(std::move(o));
        window_pos[v].push_back(p);
    }
    std::vector<uint64_t> counts(n);
    for (uint32_t v = 0; v < n; ++v) counts[v] = windows.per_node[v].size();

    Frac eps = size_class_eps(n, t);
    sort_group(cq, windows, NodeRange{0, n}, eps, PayloadOrder::lex_prefix);
    auto ranks = assign_ranks(cq, windows, PayloadOrder::lex_prefix, counts);

    // S' holds rank+1 at f(p) and 0 delimiters between streams; the rank
    // words are routed into the new chop layout
    std::vector<uint64_t> sprime(out.map.sprime_len, 0);
    RoutingDemand ship;
    for (uint32_t v = 0; v < n; ++v)
        for (size_t i = 0; i < window_pos[v].size(); ++i) {
            uint64_t sp = out.map.f(window_pos[v][i]);
            sprime[sp - 1] = ranks[v][i] + 1;
            ship.send(v, chop_node(out.map.sprime_len, n, sp - 1), ranks[v][i] + 1);
        }
    cq.route_step(ship);
    out.s_prime = DistWords::chop(sprime, n);
    return out;
}

namespace {

SaLcpResult run_sa(Clique& cq, const DistWords& s, bool want_lcp, SaTrace* trace) {
    const uint64_t len = s.total();
    if (len == 0) throw SimError("suffix array of an empty string");
    if (len + 1 > cq.config().load_limit() * uint64_t(cq.n()))
        throw SimError("string exceeds the c_L*n^2 budget");
    for (const auto& piece : s.piece)
        for (uint64_t c : piece)
            if (c == 0) throw SimError("character 0 is reserved");

    LevelResult lr = solve_with_sentinel(cq, s, 0, want_lcp, trace);

    SaLcpResult out;
    const uint32_t n = cq.n();
    out.sa = DistWords::chop(lr.sa, n);
    out.isa.piece.resize(n);
    {
        uint64_t p = 0;
        for (uint32_t v = 0; v < n; ++v) {
            out.isa.piece[v].assign(lr.isa.begin() + p, lr.isa.begin() + p + s.piece[v].size());
            p += s.piece[v].size();
        }
    }
    if (want_lcp) out.lcp = DistWords::chop(lr.lcp, n);
    return out;
}

}  // namespace

SaLcpResult suffix_array(Clique& cq, const DistWords& s, SaTrace* trace) {
    return run_sa(cq, s, false, trace);
}

SaLcpResult sa_and_lcp(Clique& cq, const DistWords& s, SaTrace* trace) {
    return run_sa(cq, s, true, trace);
}

SaLcpResult lcp_arrays(Clique& cq, const DistWords& s, const SaLcpResult* sa_state) {
    SaLcpResult full = run_sa(cq, s, true, nullptr);
    if (sa_state && sa_state->sa.total() > 0 && sa_state->sa.flatten() != full.sa.flatten())
        throw VerificationFailed("provided suffix array disagrees with the LCP computation");
    return full;
}

}  // namespace ccs
