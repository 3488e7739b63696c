#include "ccs/clique.hpp"

#include <algorithm>
#include <cassert>

#include "ccs/mathutil.hpp"

namespace ccs {

uint64_t DistWords::total() const {
    uint64_t t = 0;
    for (const auto& p : piece) t += p.size();
    return t;
}

std::vector<uint64_t> DistWords::flatten() const {
    std::vector<uint64_t> out;
    out.reserve(total());
    for (const auto& p : piece) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::pair<uint32_t, uint64_t> DistWords::locate(uint64_t index1) const {
    assert(index1 >= 1);
    uint64_t before = 0;
    for (uint32_t v = 0; v < piece.size(); ++v) {
        if (index1 <= before + piece[v].size()) return {v, index1 - before - 1};
        before += piece[v].size();
    }
    throw IndexOutOfRange(index1, index1, before);
}

uint64_t DistWords::at(uint64_t index1) const {
    auto [v, off] = locate(index1);
    return piece[v][off];
}

DistWords DistWords::chop(const std::vector<uint64_t>& flat, uint32_t n_nodes) {
    DistWords dw(n_nodes);
    uint64_t base = flat.size() / n_nodes;
    uint64_t extra = flat.size() % n_nodes;
    size_t pos = 0;
    for (uint32_t v = 0; v < n_nodes; ++v) {
        uint64_t len = base + (v < extra ? 1 : 0);
        dw.piece[v].assign(flat.begin() + pos, flat.begin() + pos + len);
        pos += len;
    }
    return dw;
}

Clique::Clique(SimConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    word_limit_ = cfg_.word_limit();
}

Inboxes Clique::route_impl(const RoutingDemand& demand, bool step) {
    const uint32_t n_active = active_nodes();
    const uint64_t limit = cfg_.load_limit();

    std::vector<uint64_t> send(n_active, 0), recv(n_active, 0);
    std::vector<const Msg*> cross;
    for (const Msg& m : demand.messages) {
        assert(m.src < n_active && m.dst < n_active);
        for (uint64_t w : m.words) check_word(w);
        if (m.src == m.dst) continue;
        send[m.src] += m.words.size();
        recv[m.dst] += m.words.size();
        cross.push_back(&m);
    }
    uint64_t max_send = 0, max_recv = 0;
    for (uint32_t v = 0; v < n_active; ++v) {
        if (send[v] > limit) throw LoadExceeded(v, "sends", send[v], limit);
        if (recv[v] > limit) throw LoadExceeded(v, "receives", recv[v], limit);
        max_send = std::max(max_send, send[v]);
        max_recv = std::max(max_recv, recv[v]);
    }
    ledger_.note_loads(max_send, max_recv);

    uint64_t rounds = 0;
    if (cfg_.backend == RoutingBackend::abstract) {
        // legal loads ride the black-box scheme in one transport phase plus
        // two coordination rounds
        if (!cross.empty() || step)
            rounds = ceil_div(std::max({max_send, max_recv, uint64_t(1)}), cfg_.load_limit()) + 2;
    } else if (!cross.empty()) {
        rounds = explicit_route_rounds(cross);
        ledger_.raw_rounds += rounds;
    }
    charge(rounds);

    uint64_t total_words = 0;
    for (const Msg* m : cross) total_words += m->words.size();
    ledger_.invocations.push_back({'r', max_send, max_recv, total_words, rounds});

    // Delivery is identical for both backends: per destination, messages in
    // (src, origin index) order. Self messages participate like any other.
    std::vector<uint64_t> seq(n_active, 0);
    std::vector<std::pair<uint64_t, const Msg*>> keyed;
    keyed.reserve(demand.messages.size());
    for (const Msg& m : demand.messages) keyed.emplace_back((uint64_t(m.src) << 32) | seq[m.src]++, &m);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Inboxes inbox(n_active);
    for (const auto& [key, m] : keyed) inbox[m->dst].push_back(*m);
    return inbox;
}

// Two-phase relay schedule. Every word is an edge of the bipartite
// source/destination multigraph; a proper edge coloring with
// L = max(max_send, max_recv) colors exists (Konig), and color class c is
// relayed through node c mod n. Each pair then carries at most ceil(L/n)
// words per phase, executed as raw rounds of at most c_m words per pair.
uint64_t Clique::explicit_route_rounds(const std::vector<const Msg*>& cross) {
    const uint32_t n = cfg_.n_nodes;
    const uint32_t n_active = cfg_.n_nodes + live_aux_;
    const uint64_t cm = cfg_.words_per_pair;

    struct Edge {
        uint32_t u, v;
        int64_t color = -1;
    };
    std::vector<Edge> edges;
    for (const Msg* m : cross)
        for (size_t w = 0; w < m->words.size(); ++w) edges.push_back({m->src, m->dst, -1});

    uint64_t colors = 0;
    for (uint32_t x = 0; x < n_active; ++x) {
        uint64_t deg_u = 0, deg_v = 0;
        for (const Edge& e : edges) {
            deg_u += e.u == x;
            deg_v += e.v == x;
        }
        colors = std::max({colors, deg_u, deg_v});
    }

    // at_u[u][c] / at_v[v][c]: edge currently colored c at that endpoint
    std::vector<std::vector<int64_t>> at_u(n_active, std::vector<int64_t>(colors, -1));
    std::vector<std::vector<int64_t>> at_v(n_active, std::vector<int64_t>(colors, -1));
    auto first_free = [&](const std::vector<int64_t>& slots) {
        for (uint64_t c = 0; c < slots.size(); ++c)
            if (slots[c] < 0) return c;
        return colors;  // unreachable for a proper degree bound
    };
    for (size_t id = 0; id < edges.size(); ++id) {
        Edge& e = edges[id];
        uint64_t a = first_free(at_u[e.u]);
        uint64_t b = first_free(at_v[e.v]);
        if (a >= colors || b >= colors) throw SimError("edge coloring ran out of colors");
        if (a != b && at_v[e.v][a] >= 0) {
            // swap colors a and b along the alternating path starting at v;
            // the path cannot reach u, so a becomes free at both endpoints
            std::vector<int64_t> path;
            bool on_v_side = true;
            uint32_t vertex = e.v;
            uint64_t col = a;
            while (true) {
                int64_t eid = on_v_side ? at_v[vertex][col] : at_u[vertex][col];
                if (eid < 0) break;
                path.push_back(eid);
                vertex = on_v_side ? edges[size_t(eid)].u : edges[size_t(eid)].v;
                on_v_side = !on_v_side;
                col = col == a ? b : a;
            }
            for (int64_t eid : path) {
                Edge& pe = edges[size_t(eid)];
                at_u[pe.u][uint64_t(pe.color)] = -1;
                at_v[pe.v][uint64_t(pe.color)] = -1;
                pe.color = int64_t(uint64_t(pe.color) == a ? b : a);
            }
            for (int64_t eid : path) {
                Edge& pe = edges[size_t(eid)];
                at_u[pe.u][uint64_t(pe.color)] = eid;
                at_v[pe.v][uint64_t(pe.color)] = eid;
            }
        }
        e.color = int64_t(a);
        at_u[e.u][a] = int64_t(id);
        at_v[e.v][a] = int64_t(id);
    }

    // phase traffic via relay (color mod n)
    std::vector<uint64_t> phase1(size_t(n_active) * n, 0);
    std::vector<uint64_t> phase2(size_t(n) * n_active, 0);
    for (const Edge& e : edges) {
        uint32_t relay = uint32_t(uint64_t(e.color) % n);
        if (relay != e.u) phase1[size_t(e.u) * n + relay] += 1;
        if (relay != e.v) phase2[size_t(relay) * n_active + e.v] += 1;
    }
    // serialize each phase into raw rounds of at most c_m words per pair
    auto phase_rounds = [&](std::vector<uint64_t> traffic) {
        uint64_t rounds = 0;
        bool pending = true;
        while (pending) {
            pending = false;
            uint64_t peak = 0;
            for (uint64_t& w : traffic) {
                uint64_t move = std::min(w, cm);
                peak = std::max(peak, move);
                w -= move;
                if (w > 0) pending = true;
            }
            if (peak == 0) break;
            if (peak > cm) throw SimError("pair capacity violated in a raw round");
            ledger_.raw_round_peak.push_back(peak);
            ++rounds;
        }
        return rounds;
    };
    return phase_rounds(std::move(phase1)) + phase_rounds(std::move(phase2));
}

Inboxes Clique::gen_route_impl(const GenDemand& demand, bool step) {
    const uint32_t n_active = active_nodes();
    const uint64_t limit = cfg_.load_limit();
    assert(demand.by_sender.size() <= n_active);

    uint64_t max_send = 0, max_recv = 0, total_words = 0, descriptors = 0;
    std::vector<uint64_t> recv(n_active, 0);
    for (uint32_t s = 0; s < demand.by_sender.size(); ++s) {
        const auto& lst = demand.by_sender[s];
        if (lst.size() > limit) throw LoadExceeded(s, "describes", lst.size(), limit);
        descriptors += lst.size();
        max_send = std::max<uint64_t>(max_send, lst.size());
        for (const RangeMsg& r : lst) {
            assert(r.dst_lo <= r.dst_hi && r.dst_hi < n_active);
            check_word(r.word);
            for (uint32_t d = r.dst_lo; d <= r.dst_hi; ++d) {
                if (d == s) continue;
                recv[d] += 1;
                total_words += 1;
            }
        }
    }
    for (uint32_t v = 0; v < n_active; ++v) {
        if (recv[v] > limit) throw TargetOverloaded(v, recv[v], limit);
        max_recv = std::max(max_recv, recv[v]);
    }
    ledger_.note_loads(max_send, max_recv);

    uint64_t rounds = (descriptors > 0 || step) ? 4 : 0;
    charge(rounds);
    ledger_.invocations.push_back({'g', max_send, max_recv, total_words, rounds});

    Inboxes inbox(n_active);
    for (uint32_t s = 0; s < demand.by_sender.size(); ++s) {
        for (const RangeMsg& r : demand.by_sender[s]) {
            for (uint32_t d = r.dst_lo; d <= r.dst_hi; ++d)
                inbox[d].push_back(Msg{s, d, {r.word}});
        }
    }
    // already in (src, descriptor index) order per destination because we
    // iterate senders in order and each sender's descriptors in order
    for (auto& box : inbox)
        std::stable_sort(box.begin(), box.end(),
                         [](const Msg& a, const Msg& b) { return a.src < b.src; });
    return inbox;
}

void Clique::with_aux_nodes(uint32_t k, const std::function<void()>& body) {
    if (k == 0) {
        body();
        return;
    }
    if (live_aux_ + k > cfg_.aux_limit()) throw AuxBudgetExceeded(live_aux_ + k, cfg_.aux_limit());
    live_aux_ += k;
    ledger_.aux_nodes_peak = std::max<uint64_t>(ledger_.aux_nodes_peak, live_aux_);
    charge_mult_ *= 2;
    try {
        body();
    } catch (...) {
        charge_mult_ /= 2;
        live_aux_ -= k;
        throw;
    }
    charge_mult_ /= 2;
    live_aux_ -= k;
}

void Clique::parallel(const std::vector<std::function<void()>>& branches) {
    const uint64_t base_rounds = ledger_.rounds_charged;
    const uint64_t base_raw = ledger_.raw_rounds;
    uint64_t best_rounds = 0, best_raw = 0;
    for (const auto& b : branches) {
        ledger_.rounds_charged = base_rounds;
        ledger_.raw_rounds = base_raw;
        b();
        best_rounds = std::max(best_rounds, ledger_.rounds_charged - base_rounds);
        best_raw = std::max(best_raw, ledger_.raw_rounds - base_raw);
    }
    ledger_.rounds_charged = base_rounds + best_rounds;
    ledger_.raw_rounds = base_raw + best_raw;
}

std::vector<std::vector<uint64_t>> Clique::query_route(
    const std::vector<std::vector<Query>>& queries, const Resolver& resolve,
    const std::vector<uint64_t>& state_words) {
    const uint32_t A = active_nodes();
    assert(queries.size() <= A && state_words.size() <= A);
    const uint64_t limit = cfg_.load_limit();

    uint64_t total = 0;
    for (uint32_t v = 0; v < queries.size(); ++v) {
        if (queries[v].size() > limit) throw LoadExceeded(v, "queries", queries[v].size(), limit);
        total += queries[v].size();
    }

    // every node announces how many queries it holds
    GenDemand counts(A);
    for (uint32_t v = 0; v < A; ++v) {
        uint64_t c = v < queries.size() ? queries[v].size() : 0;
        counts.cast(v, 0, A - 1, c);
    }
    gen_route_step(counts);

    std::vector<std::vector<uint64_t>> answers(A);
    for (uint32_t v = 0; v < queries.size(); ++v) answers[v].resize(queries[v].size());
    if (total == 0) {
        ledger_.invocations.push_back({'q', 0, 0, 0, 0});
        return answers;
    }

    // sort all queries by resolving node (Lenzen sort), tracking origins
    struct Q {
        uint32_t resolving;
        uint64_t content;
        uint32_t origin_node;
        uint64_t origin_index;
    };
    std::vector<Q> sorted;
    sorted.reserve(total);
    for (uint32_t v = 0; v < queries.size(); ++v)
        for (uint64_t i = 0; i < queries[v].size(); ++i)
            sorted.push_back({queries[v][i].resolving_node, queries[v][i].content, v, i});
    std::stable_sort(sorted.begin(), sorted.end(), [](const Q& a, const Q& b) {
        return a.resolving < b.resolving;
    });

    // ship each query (one content word) to the node holding its sorted slot
    const uint64_t per_holder = ceil_div(total, A);
    RoutingDemand to_sorted;
    for (uint64_t r = 0; r < total; ++r)
        to_sorted.send(sorted[r].origin_node, uint32_t(r / per_holder), sorted[r].content);
    route_step(to_sorted);

    // Hot nodes get ceil(s_i / A) auxiliary copies. When the copies for the
    // whole query set would exceed the c_a*n budget, the fan-out runs in
    // sequential waves; their number is bounded by the config constants, so
    // the charge stays constant for any legal query volume.
    uint64_t wave_begin = 0;
    while (wave_begin < total) {
        uint64_t wave_end = wave_begin;
        std::vector<uint64_t> s_per_node(A, 0);
        uint64_t wave_aux = 0;
        while (wave_end < total) {
            uint32_t u = sorted[wave_end].resolving;
            uint64_t with_one = ceil_div(s_per_node[u] + 1, A) - ceil_div(s_per_node[u], A);
            if (wave_aux + with_one > cfg_.aux_limit() && wave_end > wave_begin) break;
            s_per_node[u] += 1;
            wave_aux += with_one;
            ++wave_end;
        }

        std::vector<uint64_t> copies(A, 0), copy_base(A, 0);
        uint64_t total_aux = 0;
        for (uint32_t u = 0; u < A; ++u) {
            copies[u] = ceil_div(s_per_node[u], A);
            copy_base[u] = total_aux;
            total_aux += copies[u];
        }

        with_aux_nodes(uint32_t(total_aux), [&]() {
            const uint32_t base_id = A;  // first auxiliary id

            // replicate each hot node's state to its copies
            GenDemand replicate(active_nodes());
            for (uint32_t u = 0; u < A; ++u) {
                if (copies[u] == 0) continue;
                uint64_t st = u < state_words.size() ? state_words[u] : 0;
                uint32_t lo = base_id + uint32_t(copy_base[u]);
                uint32_t hi = lo + uint32_t(copies[u]) - 1;
                for (uint64_t w = 0; w < st; ++w) replicate.cast(u, lo, hi, 0);
            }
            gen_route_step(replicate);

            // the j-th query of u_i goes to copy ceil(j/A)
            RoutingDemand fan;
            std::vector<uint64_t> seen(A, 0);
            std::vector<uint32_t> copy_of(wave_end - wave_begin);
            for (uint64_t r = wave_begin; r < wave_end; ++r) {
                const Q& q = sorted[r];
                uint64_t j = seen[q.resolving]++;
                uint32_t copy = base_id + uint32_t(copy_base[q.resolving] + j / A);
                copy_of[r - wave_begin] = copy;
                fan.send(uint32_t(r / per_holder), copy, q.content);
            }
            route_step(fan);

            // resolve at the copies, route answers home
            RoutingDemand back;
            for (uint64_t r = wave_begin; r < wave_end; ++r) {
                const Q& q = sorted[r];
                auto a = resolve(q.resolving, q.content);
                if (!a.has_value()) throw Unresolvable(q.resolving, q.content);
                answers[q.origin_node][q.origin_index] = *a;
                back.send(copy_of[r - wave_begin], q.origin_node, *a);
            }
            route_step(back);
        });
        wave_begin = wave_end;
    }

    ledger_.invocations.push_back({'q', 0, 0, total, 0});
    return answers;
}

std::vector<std::vector<uint64_t>> Clique::distributed_rmq(
    const DistWords& array, const std::vector<std::vector<std::pair<uint64_t, uint64_t>>>& queries) {
    const uint32_t A = active_nodes();
    const uint64_t len = array.total();
    const uint64_t limit = cfg_.load_limit();
    assert(array.nodes() <= A);

    for (uint32_t v = 0; v < queries.size(); ++v) {
        if (queries[v].size() > limit) throw LoadExceeded(v, "queries", queries[v].size(), limit);
        for (auto [i, j] : queries[v])
            if (i < 1 || j < i || j > len) throw IndexOutOfRange(i, j, len);
    }

    // broadcast piece lengths, then per-piece minima
    GenDemand lengths(A);
    for (uint32_t v = 0; v < array.nodes(); ++v) lengths.cast(v, 0, A - 1, array.piece[v].size());
    gen_route_step(lengths);

    std::vector<uint64_t> piece_min(array.nodes(), word_limit_);
    GenDemand minima(A);
    for (uint32_t v = 0; v < array.nodes(); ++v) {
        for (uint64_t w : array.piece[v]) piece_min[v] = std::min(piece_min[v], w);
        minima.cast(v, 0, A - 1, piece_min[v]);
    }
    gen_route_step(minima);

    // prefix sums over piece lengths for locating indices
    std::vector<uint64_t> before(array.nodes() + 1, 0);
    for (uint32_t v = 0; v < array.nodes(); ++v) before[v + 1] = before[v] + array.piece[v].size();
    // suffix minima of piece_min would not help; middle parts use prefix scans
    auto locate = [&](uint64_t idx1) {
        uint32_t v = uint32_t(std::upper_bound(before.begin(), before.end(), idx1 - 1) -
                              before.begin()) - 1;
        return std::make_pair(v, idx1 - before[v] - 1);
    };

    const uint64_t K = cfg_.load_limit();  // local offsets are < c_L * n
    auto pack = [&](uint64_t lo, uint64_t hi) { return lo * K + hi; };
    Resolver resolve = [&](uint32_t node, uint64_t content) -> std::optional<uint64_t> {
        uint64_t lo = content / K, hi = content % K;
        if (node >= array.nodes() || hi >= array.piece[node].size() || lo > hi)
            return std::nullopt;
        uint64_t m = word_limit_;
        for (uint64_t p = lo; p <= hi; ++p) m = std::min(m, array.piece[node][p]);
        return m;
    };

    // split queries into prefix / middle / suffix parts
    struct Pending {
        uint64_t middle_min;
        int64_t prefix_slot = -1;  // index into the prefix query batch answers
        int64_t suffix_slot = -1;
    };
    std::vector<std::vector<Query>> prefix_q(A), suffix_q(A);
    std::vector<std::vector<Pending>> pend(A);
    for (uint32_t v = 0; v < queries.size(); ++v) {
        for (auto [i, j] : queries[v]) {
            auto [vi, oi] = locate(i);
            auto [vj, oj] = locate(j);
            Pending p;
            p.middle_min = word_limit_;
            if (vi == vj) {
                p.prefix_slot = int64_t(prefix_q[v].size());
                prefix_q[v].push_back({vi, pack(oi, oj)});
            } else {
                p.prefix_slot = int64_t(prefix_q[v].size());
                prefix_q[v].push_back({vi, pack(oi, array.piece[vi].size() - 1)});
                p.suffix_slot = int64_t(suffix_q[v].size());
                suffix_q[v].push_back({vj, pack(0, oj)});
                for (uint32_t m = vi + 1; m < vj; ++m)
                    p.middle_min = std::min(p.middle_min, piece_min[m]);
            }
            pend[v].push_back(p);
        }
    }

    std::vector<uint64_t> state(A, 0);
    for (uint32_t v = 0; v < array.nodes(); ++v) state[v] = array.piece[v].size();
    auto prefix_a = query_route(prefix_q, resolve, state);
    auto suffix_a = query_route(suffix_q, resolve, state);

    std::vector<std::vector<uint64_t>> out(A);
    for (uint32_t v = 0; v < queries.size(); ++v) {
        out[v].reserve(pend[v].size());
        for (const Pending& p : pend[v]) {
            uint64_t m = p.middle_min;
            if (p.prefix_slot >= 0) m = std::min(m, prefix_a[v][size_t(p.prefix_slot)]);
            if (p.suffix_slot >= 0) m = std::min(m, suffix_a[v][size_t(p.suffix_slot)]);
            out[v].push_back(m);
        }
    }
    ledger_.invocations.push_back({'m', 0, 0, 0, 0});
    return out;
}

}  // namespace ccs
