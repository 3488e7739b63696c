#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ccs/config.hpp"
#include "ccs/errors.hpp"
#include "ccs/ledger.hpp"

namespace ccs {

// One message of a routing demand. Payloads are sequences of model words;
// the message boundary itself carries no cost.
struct Msg {
    uint32_t src = 0;
    uint32_t dst = 0;
    std::vector<uint64_t> words;
};

// A multiset of messages. Submission order per source defines the origin
// index used for deterministic inbox ordering.
struct RoutingDemand {
    std::vector<Msg> messages;

    void send(uint32_t src, uint32_t dst, std::vector<uint64_t> words) {
        messages.push_back(Msg{src, dst, std::move(words)});
    }
    void send(uint32_t src, uint32_t dst, uint64_t word) {
        messages.push_back(Msg{src, dst, {word}});
    }
    bool empty() const { return messages.empty(); }
};

// per destination, messages sorted by (src, origin index)
using Inboxes = std::vector<std::vector<Msg>>;

// gen_route descriptor: one word delivered to every node in [dst_lo..dst_hi].
struct RangeMsg {
    uint32_t dst_lo = 0;
    uint32_t dst_hi = 0;  // inclusive
    uint64_t word = 0;
};

struct GenDemand {
    explicit GenDemand(uint32_t n_senders) : by_sender(n_senders) {}
    std::vector<std::vector<RangeMsg>> by_sender;

    void cast(uint32_t src, uint32_t dst_lo, uint32_t dst_hi, uint64_t word) {
        if (dst_hi < dst_lo) return;  // empty range, nothing to describe
        by_sender[src].push_back(RangeMsg{dst_lo, dst_hi, word});
    }
    void send(uint32_t src, uint32_t dst, uint64_t word) { cast(src, dst, dst, word); }
};

struct Query {
    uint32_t resolving_node = 0;
    uint64_t content = 0;
};

// Answers one query from the resolving node's local state; empty result
// means the node rejects the content.
using Resolver = std::function<std::optional<uint64_t>(uint32_t node, uint64_t content)>;

// A long logical word array cut into one piece per node (the input model).
struct DistWords {
    std::vector<std::vector<uint64_t>> piece;

    DistWords() = default;
    explicit DistWords(uint32_t n_nodes) : piece(n_nodes) {}

    uint64_t total() const;
    uint32_t nodes() const { return uint32_t(piece.size()); }
    std::vector<uint64_t> flatten() const;

    // global 1-based index -> (node, local 0-based offset)
    std::pair<uint32_t, uint64_t> locate(uint64_t index1) const;
    uint64_t at(uint64_t index1) const;

    // Even chop: first (total mod n) pieces get the extra word.
    static DistWords chop(const std::vector<uint64_t>& flat, uint32_t n_nodes);
};

// Deterministic synchronous simulation of an n-node congested clique.
// All communication goes through route / gen_route / query_route /
// distributed_rmq, which validate the model's load bounds and charge rounds
// on the ledger. Local computation is free.
//
// Charging rules (abstract backend): a legal routing demand is delivered by
// the black-box routing scheme within its documented constant, so
//   route       ceil(max(send,recv) / (c_L*n)) + 2  =  3 for any legal load
//   gen_route   4
//   query_route count broadcast + sort route + per wave 2*(4 + two routes)
//   rmq         2 gen_routes + 2 query_routes
// The explicit backend instead executes a two-phase relay schedule (edge
// coloring, color class c relayed via node c mod n) and charges the raw
// rounds it used, moving at most c_m words per ordered pair per round.
//
// The *_step variants are for protocol steps of the algorithms: a
// synchronous protocol consumes its round budget whether or not this
// particular input happened to fill the step with messages. The plain
// variants charge nothing for an empty demand.
//
// Messages from a node to itself are delivered directly; they neither load
// the network nor affect the charge.
class Clique {
public:
    explicit Clique(SimConfig cfg);

    const SimConfig& config() const { return cfg_; }
    RoundLedger& ledger() { return ledger_; }
    const RoundLedger& ledger() const { return ledger_; }

    uint32_t n() const { return cfg_.n_nodes; }
    uint32_t active_nodes() const { return cfg_.n_nodes + live_aux_; }

    Inboxes route(const RoutingDemand& demand) { return route_impl(demand, false); }
    Inboxes route_step(const RoutingDemand& demand) { return route_impl(demand, true); }
    Inboxes gen_route(const GenDemand& demand) { return gen_route_impl(demand, false); }
    Inboxes gen_route_step(const GenDemand& demand) { return gen_route_impl(demand, true); }

    // queries[v] holds node v's queries; answers are positionally aligned.
    // state_words[u] is the size of u's resolvable state, charged when the
    // state is replicated to auxiliary copies of hot nodes.
    std::vector<std::vector<uint64_t>> query_route(const std::vector<std::vector<Query>>& queries,
                                                   const Resolver& resolve,
                                                   const std::vector<uint64_t>& state_words);

    // Runs body with k extra simulated nodes; every round charged inside is
    // doubled (once more per nesting level).
    void with_aux_nodes(uint32_t k, const std::function<void()>& body);

    // Branches touch disjoint node sets and run in the same rounds; the
    // charge is the maximum branch charge.
    void parallel(const std::vector<std::function<void()>>& branches);

    // queries[v]: (i, j) index pairs, 1-based inclusive over the whole array.
    std::vector<std::vector<uint64_t>> distributed_rmq(
        const DistWords& array,
        const std::vector<std::vector<std::pair<uint64_t, uint64_t>>>& queries);

    uint64_t word_limit() const { return word_limit_; }

private:
    void check_word(uint64_t w) const {
        if (w > word_limit_) throw WordTooWide(w, word_limit_);
    }
    void charge(uint64_t rounds) { ledger_.rounds_charged += rounds * charge_mult_; }
    Inboxes route_impl(const RoutingDemand& demand, bool step);
    Inboxes gen_route_impl(const GenDemand& demand, bool step);
    uint64_t explicit_route_rounds(const std::vector<const Msg*>& cross);

    SimConfig cfg_;
    RoundLedger ledger_;
    uint64_t word_limit_;
    uint32_t live_aux_ = 0;
    uint64_t charge_mult_ = 1;
};

}  // namespace ccs
