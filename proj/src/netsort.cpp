#include "ccs/netsort.hpp"

#include <algorithm>
#include <cassert>

#include "ccs/errors.hpp"
#include "ccs/mathutil.hpp"

namespace ccs {

uint64_t SortingNetwork::comparator_count() const {
    uint64_t c = 0;
    for (const auto& l : levels) c += l.size();
    return c;
}

SortingNetwork build_network(uint32_t wires) {
    SortingNetwork net;
    uint32_t p2 = 1;
    while (p2 < std::max(wires, 1u)) p2 <<= 1;
    net.wires = p2;
    for (uint32_t k = 2; k <= p2; k <<= 1) {
        for (uint32_t j = k >> 1; j > 0; j >>= 1) {
            std::vector<Comparator> level;
            for (uint32_t i = 0; i < p2; ++i) {
                uint32_t l = i ^ j;
                if (l > i) {
                    bool ascending = (i & k) == 0;
                    level.push_back(ascending ? Comparator{i, l} : Comparator{l, i});
                }
            }
            net.levels.push_back(std::move(level));
        }
    }
    return net;
}

std::vector<std::vector<uint64_t>> network_sort(Clique& cq, ObjectSet objects,
                                                PayloadOrder order) {
    const uint32_t n = uint32_t(objects.per_node.size());
    const uint64_t limit = cq.config().load_limit();
    std::vector<uint64_t> original_counts(n);
    for (uint32_t v = 0; v < n; ++v) {
        original_counts[v] = objects.per_node[v].size();
        for (const auto& o : objects.per_node[v])
            if (o.payload.size() > limit) throw SizeClassViolation(o.payload.size(), limit);
    }

    // every node announces its object count; all nodes derive N and build
    // the same network
    GenDemand counts(cq.active_nodes());
    for (uint32_t v = 0; v < n; ++v) counts.cast(v, 0, n - 1, objects.per_node[v].size());
    cq.gen_route_step(counts);

    uint64_t n_objects = objects.total_objects();
    if (n_objects > limit) throw SimError("network_sort: more than c_L*n objects");
    if (n_objects == 0) return std::vector<std::vector<uint64_t>>(n);

    SortingNetwork net = build_network(uint32_t(n_objects));

    // wire -> (holder node, local index); wires beyond N carry a +infinity
    // sentinel that never moves data
    struct Slot {
        int32_t node = -1;  // -1: sentinel
        uint32_t index = 0;
    };
    std::vector<Slot> wire(net.wires);
    {
        uint32_t w = 0;
        for (uint32_t v = 0; v < n; ++v)
            for (uint32_t i = 0; i < objects.per_node[v].size(); ++i)
                wire[w++] = Slot{int32_t(v), i};
    }
    auto obj_at = [&](const Slot& s) -> const ObjectRecord& {
        return objects.per_node[uint32_t(s.node)][s.index];
    };

    const uint64_t per_node_comp = ceil_div(net.wires, n);
    for (const auto& level : net.levels) {
        // holders report (size, wire) of every comparator input to the
        // responsible node
        RoutingDemand report;
        std::vector<uint64_t> resp_words(n, 0);  // S_{v_i}: object words under v_i
        std::vector<std::vector<uint64_t>> comp_size(n);
        std::vector<std::vector<uint32_t>> comp_ids(n);
        for (uint32_t c = 0; c < level.size(); ++c) {
            uint32_t resp = uint32_t(std::min<uint64_t>(c / per_node_comp, n - 1));
            const Slot a = wire[level[c].low], b = wire[level[c].high];
            if (a.node < 0 && b.node < 0) continue;
            uint64_t sz = 0;
            if (a.node >= 0) {
                report.send(uint32_t(a.node), resp, {obj_at(a).payload.size(), level[c].low});
                sz += obj_at(a).payload.size();
            }
            if (b.node >= 0) {
                report.send(uint32_t(b.node), resp, {obj_at(b).payload.size(), level[c].high});
                sz += obj_at(b).payload.size();
            }
            if (a.node >= 0 && b.node >= 0) {
                resp_words[resp] += sz;
                comp_size[resp].push_back(sz);
                comp_ids[resp].push_back(c);
            }
        }
        cq.route_step(report);

        // each responsible node spreads its comparators over ceil(S/n)
        // auxiliary copies so that every copy hosts O(n) object words
        std::vector<uint64_t> aux_of(n), aux_base(n);
        uint64_t total_aux = 0;
        uint64_t x_max = 0;
        for (uint32_t r = 0; r < n; ++r)
            for (uint64_t s : comp_size[r]) x_max = std::max(x_max, s);
        for (uint32_t r = 0; r < n; ++r) {
            aux_of[r] = comp_ids[r].empty() ? 0 : std::max<uint64_t>(1, ceil_div(resp_words[r], n));
            aux_base[r] = total_aux;
            total_aux += aux_of[r];
        }

        std::vector<std::pair<uint32_t, uint32_t>> swaps;  // comparator wire pairs to swap
        cq.with_aux_nodes(uint32_t(total_aux), [&]() {
            const uint32_t base_id = cq.n();
            std::vector<uint32_t> comp_target(level.size(), 0);

            RoutingDemand assignment;
            for (uint32_t r = 0; r < n; ++r) {
                if (comp_ids[r].empty()) continue;
                PartitionSpec spec = greedy_partition(comp_size[r], aux_of[r], x_max);
                for (uint32_t k = 0; k < comp_ids[r].size(); ++k) {
                    uint32_t c = comp_ids[r][k];
                    uint32_t aux = base_id + uint32_t(aux_base[r] + spec.set_of(k));
                    comp_target[c] = aux;
                    const Slot a = wire[level[c].low], b = wire[level[c].high];
                    assignment.send(r, uint32_t(a.node), aux);
                    assignment.send(r, uint32_t(b.node), aux);
                }
            }
            cq.route_step(assignment);

            RoutingDemand ship;
            for (uint32_t r = 0; r < n; ++r) {
                for (uint32_t c : comp_ids[r]) {
                    const Slot a = wire[level[c].low], b = wire[level[c].high];
                    auto wa = obj_at(a).payload;
                    wa.insert(wa.begin(), level[c].low);
                    auto wb = obj_at(b).payload;
                    wb.insert(wb.begin(), level[c].high);
                    ship.send(uint32_t(a.node), comp_target[c], std::move(wa));
                    ship.send(uint32_t(b.node), comp_target[c], std::move(wb));
                }
            }
            cq.route_step(ship);

            // comparators execute; inverted pairs swap their wire metadata
            RoutingDemand results;
            for (uint32_t r = 0; r < n; ++r) {
                for (uint32_t c : comp_ids[r]) {
                    const Slot a = wire[level[c].low], b = wire[level[c].high];
                    cq.ledger().comparisons += 1;
                    bool inverted =
                        compare_payloads(order, obj_at(b).payload, obj_at(a).payload) < 0;
                    uint32_t wa = inverted ? level[c].high : level[c].low;
                    uint32_t wb = inverted ? level[c].low : level[c].high;
                    results.send(comp_target[c], uint32_t(a.node), wa);
                    results.send(comp_target[c], uint32_t(b.node), wb);
                    if (inverted) swaps.emplace_back(level[c].low, level[c].high);
                }
            }
            cq.route_step(results);
        });

        for (auto [wl, wh] : swaps) std::swap(wire[wl], wire[wh]);
        // sentinel handling is data-free: a lone real input always ends on
        // the low wire
        for (const Comparator& c : level) {
            if (wire[c.low].node < 0 && wire[c.high].node >= 0) std::swap(wire[c.low], wire[c.high]);
        }
    }

    // redistribute objects into final wire order, then assign ranks with
    // distinct-count semantics
    ObjectSet sorted(n);
    const uint64_t chunk = ceil_div(n_objects, n);
    RoutingDemand final_ship;
    for (uint32_t w = 0; w < n_objects; ++w) {
        const Slot s = wire[w];
        assert(s.node >= 0);
        const ObjectRecord& o = obj_at(s);
        auto words = object_to_words(cq, o);
        final_ship.send(uint32_t(s.node), uint32_t(w / chunk), std::move(words));
    }
    Inboxes boxes = cq.route_step(final_ship);
    for (uint32_t v = 0; v < n; ++v) {
        for (const Msg& m : boxes[v]) sorted.per_node[v].push_back(object_from_words(cq, m.words));
        std::sort(sorted.per_node[v].begin(), sorted.per_node[v].end(),
                  [&](const ObjectRecord& a, const ObjectRecord& b) {
                      return object_less(order, a, b);
                  });
    }
    return assign_ranks(cq, sorted, order, original_counts);
}

std::vector<std::vector<uint64_t>> solve_object_sort(Clique& cq, ObjectSet objects, Frac eps,
                                                     PayloadOrder order) {
    const uint32_t n = uint32_t(objects.per_node.size());
    const uint64_t total = objects.total_words();
    if (total > cq.config().load_limit() * uint64_t(cq.n()))
        throw SimError("object sort input exceeds c_L*n^2 words");
    if (eps.is_zero()) return network_sort(cq, std::move(objects), order);

    const uint64_t size_class = ipow_ceil_one_minus(cq.n(), eps);
    std::vector<uint64_t> original_counts(n);
    for (uint32_t v = 0; v < n; ++v) {
        original_counts[v] = objects.per_node[v].size();
        for (const auto& o : objects.per_node[v])
            if (o.payload.size() > size_class)
                throw SizeClassViolation(o.payload.size(), size_class);
    }
    sort_group(cq, objects, NodeRange{0, n}, eps, order);
    return assign_ranks(cq, objects, order, original_counts);
}

}  // namespace ccs
