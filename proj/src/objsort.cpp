#include "ccs/objsort.hpp"

#include <algorithm>
#include <cassert>

#include "ccs/errors.hpp"

namespace ccs {

int compare_payloads(PayloadOrder order, const std::vector<uint64_t>& a,
                     const std::vector<uint64_t>& b) {
    if (order == PayloadOrder::lex_prefix) {
        size_t l = 0;
        while (l < a.size() && l < b.size() && a[l] == b[l]) ++l;
        if (l < a.size() && l < b.size()) return a[l] < b[l] ? -1 : 1;
        if (a.size() == b.size()) return 0;
        return a.size() < b.size() ? -1 : 1;
    }
    // window_rank: [t window chars][t sampled-rank slots], 0 = not sampled
    assert(a.size() == b.size() && a.size() % 2 == 0);
    const size_t t = a.size() / 2;
    for (size_t i = 0; i < t; ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    for (size_t k = 0; k < t; ++k) {
        if (a[t + k] != 0 && b[t + k] != 0) {
            if (a[t + k] == b[t + k]) return 0;  // same sampled suffix
            return a[t + k] < b[t + k] ? -1 : 1;
        }
    }
    throw NoWitness();
}

bool object_less(PayloadOrder order, const ObjectRecord& a, const ObjectRecord& b) {
    int c = compare_payloads(order, a.payload, b.payload);
    if (c != 0) return c < 0;
    if (a.origin_node != b.origin_node) return a.origin_node < b.origin_node;
    return a.origin_index < b.origin_index;
}

uint64_t PartitionSpec::set_of(uint64_t element) const {
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), element);
    return uint64_t(it - boundaries.begin()) - 1;
}

PartitionSpec greedy_partition(const std::vector<uint64_t>& sizes, uint64_t k, uint64_t x_max) {
    if (k < 1) throw std::invalid_argument("greedy_partition: k must be >= 1");
    uint64_t total = 0;
    for (uint64_t x : sizes) {
        if (x > x_max) throw std::invalid_argument("greedy_partition: element exceeds x_max");
        total += x;
    }
    PartitionSpec spec;
    spec.boundaries.push_back(0);
    uint64_t sum = 0;
    for (uint64_t i = 0; i < sizes.size(); ++i) {
        sum += sizes[i];
        // close the current set once its sum reaches total/k, unless it is
        // already the last one
        if (spec.boundaries.size() < k && sum * k >= total && total > 0) {
            spec.boundaries.push_back(i + 1);
            sum = 0;
        }
    }
    while (spec.boundaries.size() < k + 1) spec.boundaries.push_back(sizes.size());
    spec.boundaries.back() = sizes.size();
    return spec;
}

uint64_t ObjectSet::total_objects() const {
    uint64_t t = 0;
    for (const auto& v : per_node) t += v.size();
    return t;
}

uint64_t ObjectSet::total_words() const {
    uint64_t t = 0;
    for (const auto& v : per_node)
        for (const auto& o : v) t += o.payload.size();
    return t;
}

uint64_t pack_origin(const Clique& cq, uint32_t node, uint64_t index) {
    const uint64_t K = cq.config().load_limit();
    assert(index < K);
    return uint64_t(node) * K + index;
}

std::pair<uint32_t, uint64_t> unpack_origin(const Clique& cq, uint64_t word) {
    const uint64_t K = cq.config().load_limit();
    return {uint32_t(word / K), word % K};
}

std::vector<uint64_t> object_to_words(const Clique& cq, const ObjectRecord& o) {
    std::vector<uint64_t> w;
    w.reserve(1 + o.payload.size());
    w.push_back(pack_origin(cq, o.origin_node, o.origin_index));
    w.insert(w.end(), o.payload.begin(), o.payload.end());
    return w;
}

ObjectRecord object_from_words(const Clique& cq, const std::vector<uint64_t>& words) {
    ObjectRecord o;
    auto [node, idx] = unpack_origin(cq, words[0]);
    o.origin_node = node;
    o.origin_index = uint32_t(idx);
    o.payload.assign(words.begin() + 1, words.end());
    return o;
}

namespace {

struct SortCtx {
    Clique& cq;
    ObjectSet& objects;
    Frac eps;
    PayloadOrder order;
    uint64_t group_cap;        // n^(eps/2), max flat group size
    uint64_t candidate_step;   // n^(1 - eps/2) words between candidates
    uint32_t depth_limit;      // ceil(2 / eps)
};

void local_sort(SortCtx& ctx, NodeRange range) {
    for (uint32_t v = range.lo; v < range.hi; ++v) {
        auto& lst = ctx.objects.per_node[v];
        std::sort(lst.begin(), lst.end(), [&](const ObjectRecord& a, const ObjectRecord& b) {
            return object_less(ctx.order, a, b);
        });
    }
}

// Indices (into the node's sorted list) of the objects marking every
// candidate_step words of prefix mass.
std::vector<uint64_t> mark_candidates(const std::vector<ObjectRecord>& sorted_objs, uint64_t step) {
    std::vector<uint64_t> marks;
    uint64_t mass_before = 0;
    uint64_t next_threshold = 1;  // i * step with i = next_threshold
    for (uint64_t j = 0; j < sorted_objs.size(); ++j) {
        if (mass_before >= next_threshold * step) {
            marks.push_back(j);
            next_threshold = mass_before / step + 1;
        }
        mass_before += sorted_objs[j].payload.size();
    }
    return marks;
}

// bucket index in [0..delims.size()] for an object under the split rule:
// bucket j holds objects > delim[j-1] and <= delim[j]; the last bucket has
// no upper bound
uint64_t bucket_of(const SortCtx& ctx, const ObjectRecord& o,
                   const std::vector<ObjectRecord>& delims, uint64_t bucket_count) {
    uint64_t lo = 0, hi = delims.size();
    while (lo < hi) {
        uint64_t mid = (lo + hi) / 2;
        if (object_less(ctx.order, delims[mid], o))
            lo = mid + 1;
        else
            hi = mid;
    }
    return std::min(lo, bucket_count - 1);
}

void sort_group_rec(SortCtx& ctx, NodeRange range, uint32_t depth);

// Algorithm for groups of at most n^(eps/2) nodes: local sort, candidate
// announcement, delimiter selection, bucket redistribution.
void sort_flat(SortCtx& ctx, NodeRange range) {
    Clique& cq = ctx.cq;
    const uint32_t W = range.size();
    local_sort(ctx, range);

    std::vector<std::vector<uint64_t>> marks(W);
    for (uint32_t i = 0; i < W; ++i)
        marks[i] = mark_candidates(ctx.objects.per_node[range.lo + i], ctx.candidate_step);

    // announce candidates to every other node of the group
    RoutingDemand announce;
    std::vector<ObjectRecord> cands;
    for (uint32_t i = 0; i < W; ++i) {
        for (uint64_t j : marks[i]) {
            const ObjectRecord& o = ctx.objects.per_node[range.lo + i][j];
            cands.push_back(o);
            auto words = object_to_words(cq, o);
            for (uint32_t u = 0; u < W; ++u)
                if (u != i) announce.send(range.lo + i, range.lo + u, words);
        }
    }
    cq.route_step(announce);

    std::sort(cands.begin(), cands.end(), [&](const ObjectRecord& a, const ObjectRecord& b) {
        return object_less(ctx.order, a, b);
    });
    std::vector<ObjectRecord> delims;
    if (!cands.empty()) {
        uint64_t m = ceil_div(cands.size(), W);
        for (uint64_t p = m; p <= cands.size(); p += m) delims.push_back(cands[p - 1]);
    }

    // split into K_{i,j} and ship bucket j to the j-th node of the group
    RoutingDemand ship;
    std::vector<uint64_t> bucket_mass(W, 0);
    for (uint32_t i = 0; i < W; ++i) {
        for (const ObjectRecord& o : ctx.objects.per_node[range.lo + i]) {
            uint64_t j = bucket_of(ctx, o, delims, W);
            bucket_mass[j] += o.payload.size();
            ship.send(range.lo + i, range.lo + uint32_t(j), object_to_words(cq, o));
        }
    }
    const uint64_t mass_cap = cq.config().load_limit();
    for (uint64_t j = 0; j < W; ++j)
        if (bucket_mass[j] > mass_cap)
            throw SimError("bucket mass " + std::to_string(bucket_mass[j]) +
                           " exceeds c_L*n = " + std::to_string(mass_cap));
    Inboxes boxes = cq.route_step(ship);

    for (uint32_t i = 0; i < W; ++i) {
        auto& lst = ctx.objects.per_node[range.lo + i];
        lst.clear();
        for (const Msg& m : boxes[range.lo + i]) lst.push_back(object_from_words(cq, m.words));
    }
    local_sort(ctx, range);
}

// Recursive algorithm for larger groups: candidates are shipped to a prefix
// of the group, sorted recursively, and delimiters guide a
// greedy_partition-balanced redistribution into subgroups.
void sort_recursive(SortCtx& ctx, NodeRange range, uint32_t depth) {
    Clique& cq = ctx.cq;
    const uint32_t U = range.size();
    const uint32_t s = uint32_t(std::min<uint64_t>(ctx.group_cap, U));
    local_sort(ctx, range);

    // ship candidates to the first ceil(U/s) nodes
    const uint32_t g = uint32_t(ceil_div(U, s));
    ObjectSet cand_overlay(uint32_t(ctx.objects.per_node.size()));
    RoutingDemand cand_ship;
    for (uint32_t i = 0; i < U; ++i) {
        auto marks = mark_candidates(ctx.objects.per_node[range.lo + i], ctx.candidate_step);
        uint32_t target = range.lo + i / s;  // node ceil((i+1)/s) in 1-based terms
        for (uint64_t j : marks)
            cand_ship.send(range.lo + i, target,
                           object_to_words(cq, ctx.objects.per_node[range.lo + i][j]));
    }
    Inboxes cand_boxes = cq.route_step(cand_ship);
    for (uint32_t i = 0; i < g; ++i)
        for (const Msg& m : cand_boxes[range.lo + i])
            cand_overlay.per_node[range.lo + i].push_back(object_from_words(cq, m.words));

    {
        SortCtx sub{ctx.cq, cand_overlay, ctx.eps, ctx.order, ctx.group_cap,
                    ctx.candidate_step, ctx.depth_limit};
        sort_group_rec(sub, NodeRange{range.lo, range.lo + g}, depth + 1);
    }

    // every candidate holder broadcasts its count, then the delimiter
    // holders announce the delimiters to the whole group
    GenDemand counts(cq.active_nodes());
    for (uint32_t i = 0; i < g; ++i)
        counts.cast(range.lo + i, range.lo, range.hi - 1,
                    cand_overlay.per_node[range.lo + i].size());
    cq.gen_route_step(counts);

    uint64_t c_total = 0;
    for (uint32_t i = 0; i < g; ++i) c_total += cand_overlay.per_node[range.lo + i].size();

    std::vector<ObjectRecord> delims;
    GenDemand delim_cast(cq.active_nodes());
    if (c_total > 0) {
        uint64_t m = ceil_div(c_total, s);
        uint64_t pos = 0;
        for (uint32_t i = 0; i < g; ++i) {
            for (const ObjectRecord& o : cand_overlay.per_node[range.lo + i]) {
                ++pos;
                if (pos % m == 0) {
                    delims.push_back(o);
                    delim_cast.cast(range.lo + i, range.lo, range.hi - 1,
                                    pack_origin(cq, o.origin_node, o.origin_index));
                    delim_cast.cast(range.lo + i, range.lo, range.hi - 1, o.payload.size());
                    for (uint64_t w : o.payload)
                        delim_cast.cast(range.lo + i, range.lo, range.hi - 1, w);
                }
            }
        }
    }
    cq.gen_route_step(delim_cast);

    // subgroups: balanced consecutive split of the group's nodes
    std::vector<NodeRange> subgroup(s);
    {
        uint32_t base = U / s, extra = U % s, at = range.lo;
        for (uint32_t j = 0; j < s; ++j) {
            uint32_t len = base + (j < extra ? 1 : 0);
            subgroup[j] = NodeRange{at, at + len};
            at += len;
        }
    }

    // per subgroup: leaders learn per-sender bucket masses, balance them
    // with greedy_partition, and tell each sender its target node
    std::vector<std::vector<std::vector<const ObjectRecord*>>> buckets(
        U, std::vector<std::vector<const ObjectRecord*>>(s));
    for (uint32_t i = 0; i < U; ++i)
        for (const ObjectRecord& o : ctx.objects.per_node[range.lo + i])
            buckets[i][bucket_of(ctx, o, delims, s)].push_back(&o);

    RoutingDemand mass_report;
    for (uint32_t i = 0; i < U; ++i) {
        for (uint32_t j = 0; j < s; ++j) {
            uint64_t mass = 0;
            for (const ObjectRecord* o : buckets[i][j]) mass += o->payload.size();
            mass_report.send(range.lo + i, subgroup[j].lo, mass);
        }
    }
    cq.route_step(mass_report);

    RoutingDemand assignments;
    std::vector<std::vector<uint32_t>> target(U, std::vector<uint32_t>(s));
    for (uint32_t j = 0; j < s; ++j) {
        std::vector<uint64_t> masses(U);
        for (uint32_t i = 0; i < U; ++i) {
            masses[i] = 0;
            for (const ObjectRecord* o : buckets[i][j]) masses[i] += o->payload.size();
        }
        PartitionSpec spec = greedy_partition(masses, subgroup[j].size(), cq.config().load_limit());
        for (uint32_t i = 0; i < U; ++i) {
            target[i][j] = subgroup[j].lo + uint32_t(spec.set_of(i));
            assignments.send(subgroup[j].lo, range.lo + i, target[i][j]);
        }
    }
    cq.route_step(assignments);

    RoutingDemand ship;
    for (uint32_t i = 0; i < U; ++i)
        for (uint32_t j = 0; j < s; ++j)
            for (const ObjectRecord* o : buckets[i][j])
                ship.send(range.lo + i, target[i][j], object_to_words(cq, *o));
    Inboxes boxes = cq.route_step(ship);

    for (uint32_t v = range.lo; v < range.hi; ++v) {
        auto& lst = ctx.objects.per_node[v];
        lst.clear();
        for (const Msg& m : boxes[v]) lst.push_back(object_from_words(cq, m.words));
    }

    std::vector<std::function<void()>> branches;
    for (uint32_t j = 0; j < s; ++j) {
        NodeRange r = subgroup[j];
        branches.push_back([&ctx, r, depth]() {
            SortCtx sub = ctx;
            sort_group_rec(sub, r, depth + 1);
        });
    }
    cq.parallel(branches);
}

void sort_group_rec(SortCtx& ctx, NodeRange range, uint32_t depth) {
    if (depth > ctx.depth_limit)
        throw SimError("sort_group recursion depth " + std::to_string(depth) + " exceeds " +
                       std::to_string(ctx.depth_limit));
    if (range.size() == 0) return;
    if (range.size() == 1) {  // nothing to communicate, plain local sort
        local_sort(ctx, range);
        return;
    }
    if (range.size() <= ctx.group_cap)
        sort_flat(ctx, range);
    else
        sort_recursive(ctx, range, depth);
}

}  // namespace

void sort_group(Clique& cq, ObjectSet& objects, NodeRange range, Frac eps, PayloadOrder order) {
    if (eps.num == 0 || eps.num > eps.den)
        throw std::invalid_argument("sort_group: epsilon must be in (0, 1]");
    const uint32_t n = cq.n();
    SortCtx ctx{cq,
                objects,
                eps,
                order,
                ipow_ceil_half(n, eps),
                ipow_ceil_one_minus_half(n, eps),
                uint32_t(ceil_div(uint64_t(2) * eps.den, eps.num))};
    sort_group_rec(ctx, range, 1);
}

std::vector<std::vector<uint64_t>> assign_ranks(Clique& cq, const ObjectSet& sorted,
                                                PayloadOrder order,
                                                const std::vector<uint64_t>& original_counts) {
    const uint32_t n = uint32_t(sorted.per_node.size());

    // everyone learns all object counts
    GenDemand counts(cq.active_nodes());
    for (uint32_t v = 0; v < n; ++v) counts.cast(v, 0, n - 1, sorted.per_node[v].size());
    cq.gen_route_step(counts);

    // each nonempty node passes its largest object to the next nonempty node
    RoutingDemand largest;
    int32_t prev_nonempty = -1;
    std::vector<int32_t> pred(n, -1);
    for (uint32_t v = 0; v < n; ++v) {
        if (sorted.per_node[v].empty()) continue;
        if (prev_nonempty >= 0) {
            const ObjectRecord& big = sorted.per_node[prev_nonempty].back();
            largest.send(uint32_t(prev_nonempty), v, big.payload);
            pred[v] = prev_nonempty;
        }
        prev_nonempty = int32_t(v);
    }
    cq.route_step(largest);

    // distinct counts (objects differing from the predecessor's largest)
    std::vector<uint64_t> distinct(n, 0);
    GenDemand distinct_cast(cq.active_nodes());
    for (uint32_t v = 0; v < n; ++v) {
        const auto& lst = sorted.per_node[v];
        const std::vector<uint64_t>* prev_payload =
            pred[v] >= 0 ? &sorted.per_node[pred[v]].back().payload : nullptr;
        for (size_t i = 0; i < lst.size(); ++i) {
            bool same_as_prev_obj =
                i > 0 && compare_payloads(order, lst[i].payload, lst[i - 1].payload) == 0;
            bool same_as_pred =
                i == 0 && prev_payload &&
                compare_payloads(order, lst[i].payload, *prev_payload) == 0;
            if (!same_as_prev_obj && !same_as_pred) ++distinct[v];
        }
        distinct_cast.cast(v, 0, n - 1, distinct[v]);
    }
    cq.gen_route_step(distinct_cast);

    // local rank computation, then ranks are routed to the origin nodes as
    // two positionally aligned word streams (origin index, then rank)
    RoutingDemand idx_home, rank_home;
    std::vector<std::vector<uint64_t>> ranks(n);
    for (uint32_t v = 0; v < n; ++v) ranks[v].resize(v < original_counts.size() ? original_counts[v] : 0);

    uint64_t start = 0;
    for (uint32_t v = 0; v < n; ++v) {
        const auto& lst = sorted.per_node[v];
        const std::vector<uint64_t>* prev_payload =
            pred[v] >= 0 ? &sorted.per_node[pred[v]].back().payload : nullptr;
        uint64_t r = start;
        bool first_matches_pred =
            !lst.empty() && prev_payload &&
            compare_payloads(order, lst[0].payload, *prev_payload) == 0;
        if (first_matches_pred) r = start - 1;
        for (size_t i = 0; i < lst.size(); ++i) {
            if (i > 0 && compare_payloads(order, lst[i].payload, lst[i - 1].payload) != 0) ++r;
            idx_home.send(v, lst[i].origin_node, uint64_t(lst[i].origin_index));
            rank_home.send(v, lst[i].origin_node, r);
        }
        start += distinct[v];
    }
    Inboxes idx_boxes = cq.route_step(idx_home);
    Inboxes rank_boxes = cq.route_step(rank_home);
    for (uint32_t v = 0; v < n; ++v) {
        assert(idx_boxes[v].size() == rank_boxes[v].size());
        for (size_t i = 0; i < idx_boxes[v].size(); ++i)
            ranks[v][idx_boxes[v][i].words[0]] = rank_boxes[v][i].words[0];
    }
    return ranks;
}

}  // namespace ccs
